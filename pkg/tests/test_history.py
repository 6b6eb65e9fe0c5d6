import numpy as np
import pytest

from gamedit import (
    EditDiff,
    EditOp,
    EditTool,
    Direction,
    HistoryState,
    Selection,
    apply_edit,
    auto_message,
    compute_commit_id,
)
from gamedit.errors import EmptyDiff, NothingToRedo, NothingToUndo, UnknownCommit
from gamedit.history import ROOT_ID

from helpers import random_edit_op, random_model


def make_diff(term="temp", bins=(0,), old=(0.2,), new=(0.0,)):
    return EditDiff(term_name=term, bin_indices=bins, old_scores=old, new_scores=new)


def edit_and_commit(history, model, op):
    edited, diff = apply_edit(model, op)
    term = model.term(op.selection.term_name)
    history.commit(diff, edited, message=auto_message(op, term))
    return edited


class TestCommitIds:
    def test_deterministic_for_same_parent_and_diff(self, tiny_model):
        diff = make_diff()
        h1 = HistoryState(tiny_model)
        h2 = HistoryState(tiny_model)
        c1 = h1.commit(diff, tiny_model, message="a")
        c2 = h2.commit(diff, tiny_model, message="b")
        assert c1.id == c2.id
        assert len(c1.id) == 8
        assert all(ch in "0123456789abcdef" for ch in c1.id)

    def test_id_excludes_timestamp_and_message(self, tiny_model):
        diff = make_diff()
        history = HistoryState(tiny_model)
        commit = history.commit(diff, tiny_model, message="first",
                                timestamp_ms=1000)
        history.set_message(commit.id, "rewritten for the audit log")
        history.confirm(commit.id)
        assert history.commits[0].id == commit.id == compute_commit_id(ROOT_ID, diff)

    def test_first_commit_parents_root(self, tiny_model):
        history = HistoryState(tiny_model)
        commit = history.commit(make_diff(), tiny_model, message="m")
        assert commit.parent_id == ROOT_ID

    def test_empty_diff_rejected(self, tiny_model):
        history = HistoryState(tiny_model)
        noop = make_diff(old=(0.2,), new=(0.2,))
        with pytest.raises(EmptyDiff):
            history.commit(noop, tiny_model, message="m")


class TestUndoRedo:
    def test_k_edits_k_undos_restores_original(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            model = random_model(rng, n_terms=3, max_bins=6)
            history = HistoryState(model)
            current = model
            k = 0
            for _ in range(int(rng.integers(1, 8))):
                op = random_edit_op(rng, current)
                edited, diff = apply_edit(current, op)
                if diff.is_noop:
                    continue
                term = current.term(op.selection.term_name)
                history.commit(diff, edited, message=auto_message(op, term))
                current = edited
                k += 1
            for _ in range(k):
                current = history.undo(current)
            for t1, t2 in zip(current.terms, model.terms):
                assert t1.scores.tobytes() == t2.scores.tobytes()

    def test_undo_then_redo_is_identity(self, tiny_model):
        history = HistoryState(tiny_model)
        op = EditOp(tool=EditTool.MOVE, delta=1.5, selection=Selection("temp", (0, 1)))
        edited = edit_and_commit(history, tiny_model, op)
        back = history.undo(edited)
        again = history.redo(back)
        for t1, t2 in zip(again.terms, edited.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()

    def test_undo_at_root_raises(self, tiny_model):
        history = HistoryState(tiny_model)
        with pytest.raises(NothingToUndo):
            history.undo(tiny_model)

    def test_redo_without_tail_raises(self, tiny_model):
        history = HistoryState(tiny_model)
        with pytest.raises(NothingToRedo):
            history.redo(tiny_model)

    def test_commit_truncates_redo_tail(self, tiny_model):
        history = HistoryState(tiny_model)
        current = tiny_model
        for delta in (1.0, 2.0, 3.0):
            op = EditOp(tool=EditTool.MOVE, delta=delta,
                        selection=Selection("temp", (0,)))
            current = edit_and_commit(history, current, op)
        current = history.undo(current)
        current = history.undo(current)
        assert len(history.commits) == 3
        op = EditOp(tool=EditTool.DELETE, selection=Selection("color", (0, 1)))
        current = edit_and_commit(history, current, op)
        assert len(history.commits) == 2
        assert history.head == 2
        assert history.commits[-1].parent_id == history.commits[0].id


class TestCheckout:
    def test_checkout_head_is_noop(self, tiny_model):
        history = HistoryState(tiny_model)
        op = EditOp(tool=EditTool.MOVE, delta=1.0, selection=Selection("temp", (0,)))
        edited = edit_and_commit(history, tiny_model, op)
        assert history.checkout(history.head_id, edited) is edited

    def test_checkout_root_rewinds_fully(self, tiny_model):
        history = HistoryState(tiny_model)
        current = tiny_model
        for delta in (0.5, 0.7):
            op = EditOp(tool=EditTool.MOVE, delta=delta,
                        selection=Selection("temp", (1,)))
            current = edit_and_commit(history, current, op)
        rewound = history.checkout(ROOT_ID, current)
        for t1, t2 in zip(rewound.terms, tiny_model.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()
        assert history.head == 0

    def test_checkout_then_new_edit_drops_descendants(self, tiny_model):
        history = HistoryState(tiny_model)
        current = tiny_model
        ids = []
        for delta in (0.5, 0.7, 0.9):
            op = EditOp(tool=EditTool.MOVE, delta=delta,
                        selection=Selection("temp", (1,)))
            current = edit_and_commit(history, current, op)
            ids.append(history.head_id)
        current = history.checkout(ids[0], current)
        assert len(history.commits) == 3  # tail retained until a new commit
        op = EditOp(tool=EditTool.DELETE, selection=Selection("temp", (0, 1, 2)))
        current = edit_and_commit(history, current, op)
        assert [c.id for c in history.commits[:1]] == [ids[0]]
        assert len(history.commits) == 2
        assert history.commits[1].parent_id == ids[0]

    def test_unknown_commit(self, tiny_model):
        history = HistoryState(tiny_model)
        with pytest.raises(UnknownCommit):
            history.checkout("deadbeef", tiny_model)

    def test_replay_equivalence_and_checkpoints(self):
        rng = np.random.default_rng(20)
        model = random_model(rng, n_terms=2, max_bins=5)
        history = HistoryState(model)
        current = model
        snapshots = [model]
        made = 0
        while made < 70:  # crosses two checkpoint boundaries
            op = random_edit_op(rng, current)
            edited, diff = apply_edit(current, op)
            if diff.is_noop:
                continue
            term = current.term(op.selection.term_name)
            history.commit(diff, edited, message=auto_message(op, term))
            current = edited
            snapshots.append(edited)
            made += 1
        for position in (0, 1, 31, 32, 33, 64, 70):
            reconstructed = history.model_at(position)
            expected = snapshots[position]
            for t1, t2 in zip(reconstructed.terms, expected.terms):
                assert t1.scores.tobytes() == t2.scores.tobytes()


class TestSaveGate:
    def test_empty_history_ok(self, tiny_model):
        assert HistoryState(tiny_model).save_gate().ok

    def test_blocked_lists_unconfirmed(self, tiny_model):
        history = HistoryState(tiny_model)
        op = EditOp(tool=EditTool.MOVE, delta=1.0, selection=Selection("temp", (0,)))
        edit_and_commit(history, tiny_model, op)
        gate = history.save_gate()
        assert not gate.ok
        assert gate.unconfirmed == (history.head_id,)

    def test_all_confirmed_ok(self, tiny_model):
        history = HistoryState(tiny_model)
        current = tiny_model
        for delta in (1.0, -0.5):
            op = EditOp(tool=EditTool.MOVE, delta=delta,
                        selection=Selection("temp", (0,)))
            current = edit_and_commit(history, current, op)
        for commit in list(history.commits):
            history.confirm(commit.id)
        assert history.save_gate().ok

    def test_undone_commits_do_not_block(self, tiny_model):
        history = HistoryState(tiny_model)
        op = EditOp(tool=EditTool.MOVE, delta=1.0, selection=Selection("temp", (0,)))
        edited = edit_and_commit(history, tiny_model, op)
        history.undo(edited)
        assert history.save_gate().ok  # nothing applied, nothing to confirm


class TestAutoMessage:
    def test_monotonize_on_age_range(self, clinic_model):
        age = clinic_model.term("Age")
        first = int(np.searchsorted(age.bin_edges, 81, side="right")) - 1
        last = int(np.searchsorted(age.bin_edges, 87, side="right")) - 1
        op = EditOp(tool=EditTool.MONOTONIZE, direction=Direction.INCREASING,
                    selection=Selection("Age", tuple(range(first, last + 1))))
        assert auto_message(op, age) == "monotonize-inc Age [81, 87] (7 bins)"

    def test_delete_on_categorical(self, clinic_model):
        asthma = clinic_model.term("Asthma")
        op = EditOp(tool=EditTool.DELETE, selection=Selection("Asthma", (1,)))
        assert auto_message(op, asthma) == "delete Asthma {true} (1 bins)"

    def test_user_message_persists(self, tiny_model):
        history = HistoryState(tiny_model)
        op = EditOp(tool=EditTool.MOVE, delta=1.0, selection=Selection("temp", (0,)))
        edited = edit_and_commit(history, tiny_model, op)
        commit_id = history.head_id
        history.set_message(commit_id, "reviewed with the team")
        history.confirm(commit_id)
        assert history.commits[0].message == "reviewed with the team"
