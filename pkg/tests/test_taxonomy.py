import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from kakokei.conjugate import LexicalEntry, VerbType
from kakokei.dataset import InflectionPair, TypeCounts
from kakokei.errors import MissingPrediction, TooFewRuns
from kakokei.kana import UNK, segment_symbols
from kakokei.taxonomy import (
    AuditItem,
    AuditReport,
    ErrorLabel,
    OpKind,
    align,
    classify_error,
    cross_run_consistency,
    error_distribution,
    evaluate,
    percent_str,
    verb_class_distribution,
)
from kakokei.transducer import Prediction


def brute_force_cost(gold, pred):
    """Independent minimal edit cost by exhaustive recursion (memoized on
    positions only; no path canonicalization, no shared code with align)."""
    memo = {}

    def go(i, j):
        if (i, j) in memo:
            return memo[(i, j)]
        if i == len(gold):
            result = len(pred) - j
        elif j == len(pred):
            result = len(gold) - i
        else:
            result = min(
                (0 if gold[i] == pred[j] else 1) + go(i + 1, j + 1),
                1 + go(i + 1, j),
                1 + go(i, j + 1),
            )
        memo[(i, j)] = result
        return result

    return go(0, 0)


def ops_of(script):
    return [(op.kind, op.gold, op.pred, op.gold_pos) for op in script.ops]


class TestAlign:
    def test_single_sokuon_deletion(self):
        script = align("あきれかえった", "あきれかえた")
        assert ops_of(script) == [
            (OpKind.KEEP, "あ", "あ", 0),
            (OpKind.KEEP, "き", "き", 1),
            (OpKind.KEEP, "れ", "れ", 2),
            (OpKind.KEEP, "か", "か", 3),
            (OpKind.KEEP, "え", "え", 4),
            (OpKind.DELETE, "っ", None, 5),
            (OpKind.KEEP, "た", "た", 6),
        ]

    def test_single_sokuon_insertion(self):
        script = align("おきた", "おきった")
        assert ops_of(script) == [
            (OpKind.KEEP, "お", "お", 0),
            (OpKind.KEEP, "き", "き", 1),
            (OpKind.INSERT, None, "っ", 2),
            (OpKind.KEEP, "た", "た", 2),
        ]

    def test_identity(self):
        script = align("かいた", "かいた")
        assert script.cost == 0
        assert all(op.kind == OpKind.KEEP for op in script.ops)

    def test_canonical_insertion_before_existing_sokuon(self):
        # Brute-force enumeration of the minimal scripts for まった→まつった
        # shows a single cost-1 script: insert つ after the stem ま. The
        # canonical path must pick exactly that.
        assert brute_force_cost(tuple("まった"), tuple("まつった")) == 1
        script = align("まった", "まつった")
        assert ops_of(script) == [
            (OpKind.KEEP, "ま", "ま", 0),
            (OpKind.INSERT, None, "つ", 1),
            (OpKind.KEEP, "っ", "っ", 1),
            (OpKind.KEEP, "た", "た", 2),
        ]

    def test_rightmost_edit_among_ties(self):
        # Repeated-mora deletions are ambiguous; the canonical script takes
        # the rightmost copy.
        script = align("ほめたたえた", "ほめたえた")
        deletes = [op for op in script.ops if op.kind == OpKind.DELETE]
        assert [(op.gold, op.gold_pos) for op in deletes] == [("た", 3)]

    def test_replay_reproduces_prediction(self):
        gold, pred = "つっぷした", "つっ<UNK>した"
        script = align(gold, pred)
        assert script.replay(segment_symbols(gold)) == list(
            segment_symbols(pred, allow_unknown=True)
        )


_MORAS = ["か", "き", "た", "っ", "べ", "しゃ", "い", "ん"]


class TestAlignmentOracle:
    @given(
        st.lists(st.sampled_from(_MORAS), min_size=1, max_size=6),
        st.lists(st.sampled_from(_MORAS), min_size=0, max_size=7),
    )
    @settings(max_examples=300, deadline=None)
    def test_cost_matches_brute_force(self, gold, pred):
        from kakokei.taxonomy import align_symbols

        script = align_symbols(gold, pred)
        assert script.cost == brute_force_cost(tuple(gold), tuple(pred))
        assert script.replay(gold) == pred


class TestClassifyError:
    @pytest.mark.parametrize("lemma,gold,pred,compound,want", [
        ("あきれかえる", "あきれかえった", "あきれかえた", True, ErrorLabel.GEMINATION_OMISSION),
        ("おきる", "おきた", "おきった", False, ErrorLabel.GEMINATION_INSERTION),
        ("まつ", "まった", "まつった", False, ErrorLabel.STEM_ALTERNATION_OVERREG),
        ("ほめたたえる", "ほめたたえた", "ほめたえた", True, ErrorLabel.MORPHEME_BOUNDARY),
        ("つっぷす", "つっぷした", "つっ<UNK>した", False, ErrorLabel.CHARACTER_RECOGNITION),
        ("みる", "みた", "みた", False, ErrorLabel.CORRECT),
    ])
    def test_reference_vectors(self, lemma, gold, pred, compound, want):
        assert classify_error(lemma, gold, pred, compound=compound) == want

    def test_stem_substitution(self):
        # Wrong alternation vowel inside the stem.
        assert classify_error("かく", "かいた", "かきた") == ErrorLabel.PHONOLOGICAL_SUBSTITUTION

    def test_suffix_region_edits(self):
        # Wrong suffix attachment, stem untouched.
        assert classify_error("みる", "みた", "みて") == ErrorLabel.MORPHEME_BOUNDARY

    def test_compound_collapse_needs_flag(self):
        args = ("のみはじめる", "のみはじめた", "のんだ")
        assert classify_error(*args, compound=True) == ErrorLabel.COMPOUND_VERB
        assert classify_error(*args, compound=False) == ErrorLabel.OTHER

    def test_unk_beats_everything(self):
        assert classify_error("かく", "かいた", f"{UNK}{UNK}") == ErrorLabel.CHARACTER_RECOGNITION

    def test_priority_is_order_independent(self):
        cases = [
            ("あきれかえる", "あきれかえった", "あきれかえた"),
            ("おきる", "おきた", "おきった"),
            ("まつ", "まった", "まつった"),
        ]
        first = [classify_error(*c) for c in cases]
        second = [classify_error(*c) for c in reversed(cases)][::-1]
        assert first == second


class TestPerturbationSoundness:
    def test_sampled_lexicon_perturbations(self, bundled_pairs):
        rng = random.Random(11)
        sample = rng.sample(bundled_pairs, 300)
        for pair in sample:
            gold = pair.target
            if gold[-2] == "っ":
                dropped = gold[:-2] + gold[-1]
                assert classify_error(pair.lemma, gold, dropped) == ErrorLabel.GEMINATION_OMISSION
            else:
                inserted = gold[:-1] + "っ" + gold[-1]
                assert classify_error(pair.lemma, gold, inserted) == ErrorLabel.GEMINATION_INSERTION


def report_of(labels_and_types, run_id="synthetic"):
    items = []
    for i, (label, vtype) in enumerate(labels_and_types):
        items.append(AuditItem(
            lemma=f"verb{i}", gold="x", predicted="x" if label == ErrorLabel.CORRECT else "y",
            verb_type=vtype, label=label, script=None,
        ))
    return AuditReport.from_items(run_id, items)


class TestEvaluate:
    LEXICON = {
        "みる": LexicalEntry("みる"),
        "かく": LexicalEntry("かく"),
        "たべる": LexicalEntry("たべる"),
        "ねがえる": LexicalEntry("ねがえる", godan_override=True),
    }
    SPLIT = [
        InflectionPair("みる", "みた"),
        InflectionPair("かく", "かいた"),
        InflectionPair("たべる", "たべた"),
        InflectionPair("ねがえる", "ねがえった"),
    ]

    def preds(self, mapping):
        return [Prediction(p.lemma, mapping.get(p.lemma, p.target), "t") for p in self.SPLIT]

    def test_all_correct(self):
        report = evaluate(self.SPLIT, self.preds({}), self.LEXICON)
        assert report.accuracy == 1.0
        assert report.error_total == 0
        assert all(v == 0 for v in report.counts_by_verbtype.values())

    def test_one_of_four_wrong(self):
        report = evaluate(self.SPLIT, self.preds({"ねがえる": "ねがえた"}), self.LEXICON)
        assert report.accuracy == 0.75
        assert report.counts_by_label[ErrorLabel.GEMINATION_OMISSION] == 1
        assert report.counts_by_verbtype[VerbType.TYPE4_2] == 1

    def test_missing_prediction(self):
        with pytest.raises(MissingPrediction):
            evaluate(self.SPLIT, self.preds({})[:-1], self.LEXICON)

    def test_count_conservation(self, bundled_lexicon, bundled_pairs):
        from kakokei.dataset import split
        from kakokei.transducer import learn_rules, predict_pairs

        s = split(bundled_pairs, seed=0)
        ruleset = learn_rules(s.train)
        report = evaluate(
            s.test, predict_pairs(ruleset, s.test, "t"), bundled_lexicon.by_lemma
        )
        non_correct = sum(
            count for label, count in report.counts_by_label.items()
            if label != ErrorLabel.CORRECT
        )
        assert non_correct == report.error_total
        assert sum(report.counts_by_verbtype.values()) == report.error_total
        assert report.error_total == report.total - report.correct


# Error-count fixture shaped like a real multi-seed audit of a high-accuracy
# model: 53 errors, omissions dominating.
FIFTY_THREE = (
    [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE4_2)] * 16
    + [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE4_1)] * 13
    + [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE1)] * 4
    + [(ErrorLabel.GEMINATION_INSERTION, VerbType.TYPE2)] * 7
    + [(ErrorLabel.PHONOLOGICAL_SUBSTITUTION, VerbType.TYPE1)] * 6
    + [(ErrorLabel.MORPHEME_BOUNDARY, VerbType.TYPE1)] * 3
    + [(ErrorLabel.CHARACTER_RECOGNITION, VerbType.TYPE1)] * 1
    + [(ErrorLabel.COMPOUND_VERB, VerbType.TYPE2)] * 2
    + [(ErrorLabel.COMPOUND_VERB, VerbType.TYPE1)] * 1
)

FIFTY_ONE = (
    [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE4_2)] * 22
    + [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE4_1)] * 6
    + [(ErrorLabel.GEMINATION_OMISSION, VerbType.TYPE1)] * 4
    + [(ErrorLabel.GEMINATION_INSERTION, VerbType.TYPE2)] * 9
    + [(ErrorLabel.PHONOLOGICAL_SUBSTITUTION, VerbType.TYPE1)] * 4
    + [(ErrorLabel.MORPHEME_BOUNDARY, VerbType.TYPE1)] * 4
    + [(ErrorLabel.CHARACTER_RECOGNITION, VerbType.TYPE1)] * 1
    + [(ErrorLabel.COMPOUND_VERB, VerbType.TYPE2)] * 1
)


class TestErrorDistribution:
    def test_percentage_strings(self):
        rows = error_distribution(report_of(FIFTY_THREE))
        assert [(r.label, r.count, r.percent) for r in rows] == [
            (ErrorLabel.GEMINATION_OMISSION, 33, "62.3"),
            (ErrorLabel.GEMINATION_INSERTION, 7, "13.2"),
            (ErrorLabel.PHONOLOGICAL_SUBSTITUTION, 6, "11.3"),
            (ErrorLabel.MORPHEME_BOUNDARY, 3, "5.7"),
            (ErrorLabel.CHARACTER_RECOGNITION, 1, "1.9"),
            (ErrorLabel.COMPOUND_VERB, 3, "5.7"),
        ]

    def test_empty_report(self):
        assert error_distribution(report_of([])) == []

    def test_single_error(self):
        rows = error_distribution(report_of([(ErrorLabel.OTHER, VerbType.TYPE1)]))
        assert [(r.count, r.percent) for r in rows] == [(1, "100.0")]

    def test_half_up_rounding(self):
        # 1/8 = 12.5 exactly; half-up keeps the 5.
        assert percent_str(1, 8) == "12.5"
        assert percent_str(1, 16) == "6.3"  # 6.25 rounds up, not to even


class TestVerbClassDistribution:
    COUNTS = TypeCounts(type1=2503, type2=1298, type4_1=119, type4_2=37, type4_3=1)

    def test_overrepresentation_of_small_class(self):
        rows = verb_class_distribution(report_of(FIFTY_THREE), self.COUNTS)
        by_type = {r.verb_type: r for r in rows}
        row = by_type[VerbType.TYPE4_2]
        assert (row.errors, row.percent, row.dataset_count) == (16, "30.2", 37)
        # error share 16/53 against dataset share 37/3958
        assert row.overrepresentation == pytest.approx((16 / 53) / (37 / 3958))
        assert row.overrepresentation > 30

    def test_uniform_errors_have_unit_ratio(self):
        labels = (
            [(ErrorLabel.OTHER, VerbType.TYPE1)] * 2503
            + [(ErrorLabel.OTHER, VerbType.TYPE2)] * 1298
            + [(ErrorLabel.OTHER, VerbType.TYPE4_1)] * 119
            + [(ErrorLabel.OTHER, VerbType.TYPE4_2)] * 37
            + [(ErrorLabel.OTHER, VerbType.TYPE4_3)] * 1
        )
        rows = verb_class_distribution(report_of(labels), self.COUNTS)
        for row in rows:
            assert row.overrepresentation == pytest.approx(1.0)

    def test_zero_errors(self):
        rows = verb_class_distribution(report_of([]), self.COUNTS)
        assert all(row.errors == 0 and row.percent == "0.0" for row in rows)


class TestCrossRunConsistency:
    def test_identical_reports(self):
        a = report_of(FIFTY_THREE, run_id="a")
        b = report_of(FIFTY_THREE, run_id="b")
        consistency = cross_run_consistency([a, b])
        for stats in consistency.label_shares.values():
            assert stats.range == 0.0
        assert consistency.jaccard_by_pair[("a", "b")] == 1.0

    def test_gemination_shares(self):
        consistency = cross_run_consistency([
            report_of(FIFTY_THREE, run_id="model-a"),
            report_of(FIFTY_ONE, run_id="model-b"),
        ])
        assert consistency.gemination_share_by_run["model-a"] == pytest.approx(40 / 53)
        assert consistency.gemination_share_by_run["model-b"] == pytest.approx(41 / 51)
        # 75.5% and 80.4% once rendered at one decimal
        assert percent_str(40, 53) == "75.5"
        assert percent_str(41, 51) == "80.4"

    def test_disjoint_error_sets(self):
        def renamed(report, run_id, offset):
            items = [
                AuditItem(
                    lemma=f"w{offset + i}", gold=it.gold, predicted=it.predicted,
                    verb_type=it.verb_type, label=it.label, script=None,
                )
                for i, it in enumerate(report.items)
            ]
            return AuditReport.from_items(run_id, items)

        base = report_of([(ErrorLabel.OTHER, VerbType.TYPE1)] * 5)
        consistency = cross_run_consistency(
            [renamed(base, "a", 0), renamed(base, "b", 100)]
        )
        assert consistency.jaccard_by_pair[("a", "b")] == 0.0

    def test_too_few_runs(self):
        with pytest.raises(TooFewRuns):
            cross_run_consistency([report_of(FIFTY_THREE)])


class TestScriptEnumeration:
    def test_canonical_script_is_minimal_among_all(self):
        # For a handful of short pairs, enumerate every alignment path and
        # confirm the canonical cost is the true minimum.
        pairs = [
            ("たった", "たた"), ("みた", "みった"), ("かいた", "かった"),
            ("ほめたたえた", "ほめたえた"), ("しゃべった", "しゃべた"),
        ]
        for gold, pred in pairs:
            g = segment_symbols(gold)
            p = segment_symbols(pred)
            assert align(gold, pred).cost == brute_force_cost(tuple(g), tuple(p))

    def test_exhaustive_tiny_space(self):
        moras = ["た", "っ"]
        for n_g, n_p in itertools.product(range(4), range(4)):
            for gold in itertools.product(moras, repeat=n_g):
                for pred in itertools.product(moras, repeat=n_p):
                    from kakokei.taxonomy import align_symbols

                    script = align_symbols(list(gold), list(pred))
                    assert script.cost == brute_force_cost(gold, pred)
                    assert script.replay(list(gold)) == list(pred)
