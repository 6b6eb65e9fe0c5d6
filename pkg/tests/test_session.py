import pytest

from gamedit import (
    EditOp,
    EditTool,
    EditorSession,
    Scope,
    Selection,
    load_model,
)
from gamedit.errors import EmptyDiff, NoStagedEdit, StagedEditPending


def move_op(term="temp", bins=(0,), delta=1.0):
    return EditOp(tool=EditTool.MOVE, delta=delta,
                  selection=Selection(term, tuple(bins)))


class TestStaging:
    def test_preview_then_discard_restores(self, tiny_model):
        session = EditorSession(tiny_model)
        before = session.model
        session.preview(move_op())
        session.discard()
        assert session.model is before
        assert session.staged is None

    def test_preview_then_accept_adds_commit(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(move_op())
        commit = session.accept()
        assert len(session.history.commits) == 1
        assert session.history.head_id == commit.id
        assert session.model.terms[0].scores[0] == pytest.approx(1.2)

    def test_second_preview_blocked(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(move_op())
        with pytest.raises(StagedEditPending):
            session.preview(move_op(delta=2.0))

    def test_noop_preview_flagged_and_accept_rejected(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(EditOp(tool=EditTool.DELETE,
                               selection=Selection("temp", (0, 1, 2))))
        session.accept()
        staged = session.preview(EditOp(tool=EditTool.DELETE,
                                        selection=Selection("temp", (0, 1, 2))))
        assert staged.diff.is_noop
        with pytest.raises(EmptyDiff):
            session.accept()
        session.discard()

    def test_resolve_without_preview(self, tiny_model):
        session = EditorSession(tiny_model)
        with pytest.raises(NoStagedEdit):
            session.accept()
        with pytest.raises(NoStagedEdit):
            session.discard()

    def test_mutations_blocked_while_staged(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(move_op())
        for call in (session.undo, session.redo, lambda: session.checkout("ROOT")):
            with pytest.raises(StagedEditPending):
                call()


class TestVersionsForReports:
    def test_current_tracks_staged_model(self, clinic_model, clinic_dataset):
        session = EditorSession(clinic_model, dataset=clinic_dataset)
        base = session.metrics(Scope.global_())
        session.preview(move_op(term="Age", bins=range(0, 40), delta=3.0))
        staged = session.metrics(Scope.global_())
        assert staged.previous.classification == base.current.classification
        assert staged.current.classification != base.current.classification
        session.discard()
        after = session.metrics(Scope.global_())
        assert after.current.classification == base.current.classification

    def test_previous_is_one_commit_back_after_accept(self, clinic_model, clinic_dataset):
        session = EditorSession(clinic_model, dataset=clinic_dataset)
        session.preview(move_op(term="Age", bins=range(0, 40), delta=3.0))
        session.accept()
        triple = session.metrics(Scope.global_())
        assert triple.previous.classification == triple.original.classification
        assert triple.current.classification != triple.previous.classification

    def test_undo_redo_checkout_flow(self, clinic_model, clinic_dataset):
        session = EditorSession(clinic_model, dataset=clinic_dataset)
        session.preview(move_op(term="Age", bins=range(0, 10), delta=1.0))
        first = session.accept()
        session.preview(move_op(term="Age", bins=range(10, 20), delta=-1.0))
        session.accept()
        session.undo()
        assert session.history.head_id == first.id
        session.redo()
        assert session.history.head == 2
        session.checkout("ROOT")
        for t1, t2 in zip(session.model.terms, clinic_model.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()

    def test_correlation_uses_current_model(self, clinic_model, clinic_dataset):
        session = EditorSession(clinic_model, dataset=clinic_dataset)
        entries = session.correlation(Selection("Age", tuple(range(60, 89))))
        assert {e.term_name for e in entries} == {"Asthma", "Gender"}


class TestSessionSave:
    def test_save_blocked_until_confirmed(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(move_op())
        commit = session.accept()
        result = session.save()
        assert not result.ok
        assert result.unconfirmed == (commit.id,)
        session.confirm(commit.id)
        result = session.save()
        assert result.ok
        assert result.file_text is not None

    def test_saved_session_reloads_with_history(self, tiny_model):
        session = EditorSession(tiny_model)
        session.preview(move_op(delta=0.75))
        commit = session.accept()
        session.confirm(commit.id)
        session.set_message(commit.id, "raised cold-weather scores")
        text = session.save().file_text
        loaded = load_model(text)
        resumed = EditorSession(loaded.model, history=loaded.history)
        assert resumed.history.commits[0].message == "raised cold-weather scores"
        resumed.undo()
        for t1, t2 in zip(resumed.model.terms, tiny_model.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()

    def test_feature_summaries_sorted_by_importance(self, clinic_model, clinic_dataset):
        session = EditorSession(clinic_model, dataset=clinic_dataset)
        rows = session.feature_summaries()
        importances = [r["importance"] for r in rows]
        assert importances == sorted(importances, reverse=True)
        assert rows[0]["name"] == "Age"
