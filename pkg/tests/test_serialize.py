import json

import numpy as np
import pytest

from gamedit import (
    HistoryState,
    apply_edit,
    auto_message,
    load_model,
    save_model,
)
from gamedit.errors import ReplayMismatch, SchemaError

from helpers import random_edit_op, random_model


def build_history(rng, model, n_edits=4):
    history = HistoryState(model)
    current = model
    made = 0
    while made < n_edits:
        op = random_edit_op(rng, current)
        edited, diff = apply_edit(current, op)
        if diff.is_noop:
            continue
        term = current.term(op.selection.term_name)
        history.commit(diff, edited, message=auto_message(op, term),
                       timestamp_ms=1700000000000 + made)
        current = edited
        made += 1
    return current, history


class TestRoundTrip:
    def test_save_load_save_identical_without_history(self):
        rng = np.random.default_rng(30)
        for _ in range(10):
            model = random_model(rng, n_terms=3, with_interactions=True,
                                 with_stddev=bool(rng.random() < 0.5))
            text = save_model(model)
            loaded = load_model(text)
            assert save_model(loaded.model) == text

    def test_save_load_save_identical_with_history(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            model = random_model(rng, n_terms=3, max_bins=6)
            current, history = build_history(rng, model)
            text = save_model(current, history)
            loaded = load_model(text)
            assert loaded.history is not None
            assert save_model(loaded.model, loaded.history) == text

    def test_loaded_history_replays_to_original(self):
        rng = np.random.default_rng(32)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=5)
        loaded = load_model(save_model(current, history))
        for t1, t2 in zip(loaded.original.terms, model.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()
        assert loaded.history.head == 5
        for t1, t2 in zip(loaded.model.terms, current.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()

    def test_head_below_tail_round_trips(self):
        rng = np.random.default_rng(33)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=3)
        current = history.undo(current)  # keep a redo tail
        text = save_model(current, history)
        loaded = load_model(text)
        assert loaded.history.head == 2
        assert len(loaded.history.commits) == 3
        assert save_model(loaded.model, loaded.history) == text

    def test_numbers_survive_exactly(self):
        rng = np.random.default_rng(34)
        model = random_model(rng, n_terms=4, max_bins=8)
        loaded = load_model(save_model(model))
        assert loaded.model.intercept == model.intercept
        for t1, t2 in zip(loaded.model.terms, model.terms):
            assert t1.scores.tobytes() == t2.scores.tobytes()
            assert t1.counts.tolist() == t2.counts.tolist()


class TestSchemaValidation:
    def test_length_mismatch_reported_at_term(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        doc["terms"][1]["scores"] = [0.1]
        with pytest.raises(SchemaError) as err:
            load_model(json.dumps(doc))
        assert err.value.path == "$.terms[1]"

    def test_unknown_root_field_rejected_with_position(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        doc["surprise"] = 1
        with pytest.raises(SchemaError) as err:
            load_model(json.dumps(doc))
        assert err.value.path == "$.surprise"

    def test_unknown_term_field_rejected(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        doc["terms"][0]["color"] = "red"
        with pytest.raises(SchemaError) as err:
            load_model(json.dumps(doc))
        assert err.value.path == "$.terms[0].color"

    def test_bad_link_rejected(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        doc["link"] = "probit"
        with pytest.raises(SchemaError) as err:
            load_model(json.dumps(doc))
        assert err.value.path == "$.link"

    def test_invalid_json_rejected(self):
        with pytest.raises(SchemaError):
            load_model("{not json")

    def test_non_increasing_edges_rejected(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        doc["terms"][0]["bin_edges"] = [0.0, 0.0, 20.0]
        with pytest.raises(SchemaError) as err:
            load_model(json.dumps(doc))
        assert err.value.path == "$.terms[0]"

    def test_missing_required_field(self, tiny_model):
        doc = json.loads(save_model(tiny_model))
        del doc["terms"][0]["counts"]
        with pytest.raises(SchemaError):
            load_model(json.dumps(doc))


class TestReplayVerification:
    def test_tampered_diff_detected(self):
        rng = np.random.default_rng(35)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=3)
        doc = json.loads(save_model(current, history))
        doc["history"]["commits"][1]["diff"]["new"][0] += 0.5
        with pytest.raises(ReplayMismatch) as err:
            load_model(json.dumps(doc))
        assert err.value.commit_id == doc["history"]["commits"][1]["id"]

    def test_tampered_id_detected(self):
        rng = np.random.default_rng(36)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=2)
        doc = json.loads(save_model(current, history))
        doc["history"]["commits"][0]["id"] = "00000000"
        with pytest.raises(ReplayMismatch):
            load_model(json.dumps(doc))

    def test_broken_parent_chain_detected(self):
        rng = np.random.default_rng(37)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=2)
        doc = json.loads(save_model(current, history))
        doc["history"]["commits"][1]["parent"] = "ROOT"
        with pytest.raises(ReplayMismatch):
            load_model(json.dumps(doc))

    def test_tampered_model_weights_detected(self):
        rng = np.random.default_rng(38)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=2)
        doc = json.loads(save_model(current, history))
        touched = doc["history"]["commits"][-1]["diff"]["term"]
        for term in doc["terms"]:
            if term["name"] == touched:
                term["scores"][doc["history"]["commits"][-1]["diff"]["bins"][0]] += 1.0
        with pytest.raises(ReplayMismatch):
            load_model(json.dumps(doc))

    def test_timestamp_and_message_edits_load_fine(self):
        rng = np.random.default_rng(39)
        model = random_model(rng, n_terms=2, max_bins=5)
        current, history = build_history(rng, model, n_edits=2)
        doc = json.loads(save_model(current, history))
        doc["history"]["commits"][0]["message"] = "annotated later"
        doc["history"]["commits"][0]["timestamp"] = 42
        loaded = load_model(json.dumps(doc))
        assert loaded.history.commits[0].message == "annotated later"
