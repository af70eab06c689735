"""Design space: frequency table constants, registry soundness, and
frequency-ranked suggestions."""

import pytest

from motioncomic import designspace as ds
from motioncomic.errors import UnclassifiedAction, UnknownTemplate
from motioncomic.story import ActionCategory as C
from motioncomic.story import SvoAction

K = ds.AtomicOpKind

PRINTED_ROW_TOTALS = {
    C.ATRANS: 34, C.PTRANS: 734, C.PROPEL: 224, C.MOVE: 551,
    C.INGEST: 52, C.EXPEL: 61, C.SPEAK: 199, C.MENTAL: 90,
}
PRINTED_COL_TOTALS = {
    K.PATH_MOVEMENT: 884, K.SCALE: 87, K.ROTATION: 475,
    K.FLIP: 18, K.APPEARANCE: 427, K.DISAPPEARANCE: 54,
}


class TestFrequencyTable:
    def test_row_totals_match_printed_values(self):
        for cat, total in PRINTED_ROW_TOTALS.items():
            assert ds.TABLE.row_total(cat) == total

    def test_col_totals_match_printed_values(self):
        for op, total in PRINTED_COL_TOTALS.items():
            assert ds.TABLE.col_total(op) == total

    def test_grand_total(self):
        assert ds.TABLE.grand_total() == 1945

    def test_spot_cells(self):
        assert ds.TABLE.count(C.PTRANS, K.PATH_MOVEMENT) == 593
        assert ds.TABLE.count(C.MOVE, K.ROTATION) == 395
        assert ds.TABLE.count(C.SPEAK, K.APPEARANCE) == 168

    def test_atomic_op_kinds_closed_set_of_six(self):
        assert len(list(K)) == 6


class TestNonzeroOps:
    def test_atrans_row(self):
        assert ds.nonzero_ops(C.ATRANS) == {K.PATH_MOVEMENT, K.APPEARANCE, K.DISAPPEARANCE}

    def test_move_row(self):
        assert ds.nonzero_ops(C.MOVE) == {K.PATH_MOVEMENT, K.SCALE, K.ROTATION, K.FLIP}

    def test_expel_row(self):
        assert ds.nonzero_ops(C.EXPEL) == {K.PATH_MOVEMENT, K.APPEARANCE}


class TestRegistry:
    EXPECTED = {
        C.ATRANS: ["atrans.transfer_path", "atrans.vanish_reappear_at_recipient"],
        C.PTRANS: ["ptrans.path", "ptrans.dis_reappear"],
        C.INGEST: ["ingest.approach_then_vanish", "ingest.vanish"],
        C.EXPEL: ["expel.emerge_then_path"],
        C.SPEAK: ["speak.bubble_appear", "speak.bubble_scale_in", "speak.onomatopoeia_text"],
        C.MENTAL: ["mental.thought_bubble_appear", "mental.thought_bubble_scale_in"],
        C.MOVE: ["move.limb_gesture", "move.nod", "move.wave", "move.hop"],
        C.PROPEL: ["propel.strike", "propel.launch"],
    }

    def test_patterns_per_category(self):
        for cat, ids in self.EXPECTED.items():
            assert [t.id for t in ds.patterns_for(cat)] == ids

    def test_every_pattern_non_empty_and_sound(self):
        for cat in C:
            templates = ds.patterns_for(cat)
            assert templates
            allowed = ds.nonzero_ops(cat)
            for t in templates:
                assert t.op_kinds, t.id
                assert set(t.op_kinds) <= allowed, t.id

    def test_ingest_uses_path_plus_disappear_and_bare_vanish(self):
        ops = {t.id: t.op_kinds for t in ds.patterns_for(C.INGEST)}
        assert ops["ingest.approach_then_vanish"] == (K.PATH_MOVEMENT, K.DISAPPEARANCE)
        assert ops["ingest.vanish"] == (K.DISAPPEARANCE,)

    def test_expel_stage_order_appear_then_path(self):
        (t,) = ds.patterns_for(C.EXPEL)
        assert t.op_kinds == (K.APPEARANCE, K.PATH_MOVEMENT)

    def test_unknown_template_id(self):
        with pytest.raises(UnknownTemplate):
            ds.template_by_id("ptrans.teleport")


class TestScoring:
    def test_ptrans_path_scores_593(self):
        assert ds.score_pattern(ds.template_by_id("ptrans.path")) == 593

    def test_dis_reappear_is_min_of_constituents(self):
        assert ds.score_pattern(ds.template_by_id("ptrans.dis_reappear")) == 18  # min(99, 18)

    def test_atrans_vanish_reappear(self):
        assert ds.score_pattern(ds.template_by_id("atrans.vanish_reappear_at_recipient")) == 4  # min(6, 4)


def action(cat) -> SvoAction:
    return SvoAction(0, "someone", "did", "thing", "", cat)


class TestSuggest:
    def test_ptrans_ranking(self):
        out = ds.suggest(action(C.PTRANS))
        assert [(s.template.id, s.score, s.rank) for s in out] == [
            ("ptrans.path", 593, 1), ("ptrans.dis_reappear", 18, 2)
        ]

    def test_atrans_ranking(self):
        out = ds.suggest(action(C.ATRANS))
        assert [(s.template.id, s.score) for s in out] == [
            ("atrans.transfer_path", 24), ("atrans.vanish_reappear_at_recipient", 4)
        ]

    def test_ingest_ranks_vanish_first_by_min_rule(self):
        out = ds.suggest(action(C.INGEST))
        assert [(s.template.id, s.score) for s in out] == [
            ("ingest.vanish", 32), ("ingest.approach_then_vanish", 20)
        ]

    def test_ties_break_by_registry_order(self):
        out = ds.suggest(action(C.MOVE))
        assert [s.template.id for s in out] == ["move.limb_gesture", "move.nod", "move.wave", "move.hop"]
        assert [s.score for s in out] == [395, 395, 395, 106]

    def test_ranks_dense_scores_non_increasing(self):
        for cat in C:
            out = ds.suggest(action(cat))
            assert [s.rank for s in out] == list(range(1, len(out) + 1))
            assert all(a.score >= b.score for a, b in zip(out, out[1:]))

    def test_unclassified_action_rejected(self):
        with pytest.raises(UnclassifiedAction):
            ds.suggest(SvoAction(0, "someone", "did", "", "", None))

    def test_pure_function(self):
        a = action(C.SPEAK)
        assert [s.to_dict() for s in ds.suggest(a)] == [s.to_dict() for s in ds.suggest(a)]


class TestExportedResource:
    def test_committed_resource_matches_registry(self):
        assert ds.load_design_space_resource() == ds.design_space_dict()

    def test_resource_carries_parameter_schemas(self):
        data = ds.design_space_dict()
        by_id = {t["id"]: t for t in data["templates"]}
        speed = next(p for p in by_id["ptrans.path"]["parameter_schema"] if p["name"] == "speed")
        assert speed["default"] == 200.0
        assert speed["unit"] == "units/s"
