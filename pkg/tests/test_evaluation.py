import io
import math

import pytest

from cdwsd.disambiguator import SenseDistribution, Weighting, WsdConfig
from cdwsd.evaluation import (
    CorpusFormatError,
    CorpusItem,
    SemcorParseError,
    apply_axis_value,
    evaluate,
    ingest_semcor,
    load_corpus,
    make_system,
    parse_relations,
    render_corpus_tsv,
    render_evaluation_csv,
    render_sweep_csv,
    score_item,
    sweep,
)
from cdwsd.lexicon import RelationType
from conftest import compact


def corpus_from(text: str):
    return load_corpus(io.StringIO(text))


def item(doc="br-a01", cat="A", pos=0, lemma="end", gold=("end1",)):
    return CorpusItem(
        doc_id=doc, category=cat, position=pos, lemma=lemma, gold=frozenset(gold)
    )


def point_mass_on(sense, senses):
    return SenseDistribution(
        entries=tuple((s, 1.0 if s == sense else 0.0) for s in senses)
    )


class TestLoadCorpus:
    def test_three_lines(self):
        items = corpus_from(
            "br-a01\tA\t1\tend\tend4\n"
            "br-a01\tA\t2\troad\troad\n"
            "br-n05\tN\t1\tfabric\tfabric\n"
        )
        assert len(items) == 3
        assert items[0].gold == frozenset({"end4"})
        assert items[2].category == "N"

    def test_duplicate_position_names_line(self):
        with pytest.raises(CorpusFormatError, match="line 2"):
            corpus_from("d\tA\t1\tend\tend1\nd\tA\t1\troad\troad\n")

    def test_bad_category(self):
        with pytest.raises(CorpusFormatError, match="category"):
            corpus_from("d\tZ\t1\tend\tend1\n")

    def test_empty_gold(self):
        with pytest.raises(CorpusFormatError, match="gold"):
            corpus_from("d\tA\t1\tend\t\n")

    def test_bad_field_count(self):
        with pytest.raises(CorpusFormatError, match="5"):
            corpus_from("d\tA\t1\tend\n")

    def test_bad_position(self):
        with pytest.raises(CorpusFormatError, match="position"):
            corpus_from("d\tA\txx\tend\tend1\n")

    def test_multi_gold_parsed(self):
        items = corpus_from("d\tA\t1\tend\tend1,end2\n")
        assert items[0].gold == frozenset({"end1", "end2"})

    def test_round_trip(self):
        items = corpus_from(
            "br-a01\tA\t1\tend\tend1,end4\nbr-a01\tA\t2\troad\troad\n"
        )
        assert load_corpus(io.StringIO(render_corpus_tsv(items))) == items


class TestScoreItem:
    def test_point_mass_on_gold(self):
        dist = point_mass_on("end4", ["end1", "end4"])
        assert score_item(dist, frozenset({"end4"})) == 1.0

    def test_half_mass(self):
        dist = SenseDistribution(entries=(("a", 0.5), ("b", 0.5)))
        assert score_item(dist, frozenset({"a"})) == 0.5

    def test_abstention_scores_zero(self):
        dist = SenseDistribution(entries=(), abstained=True)
        assert score_item(dist, frozenset({"a"})) == 0.0

    def test_mass_sums_over_gold_set(self):
        dist = SenseDistribution(entries=(("a", 0.25), ("b", 0.25), ("c", 0.5)))
        assert score_item(dist, frozenset({"a", "c"})) == 0.75


class TestEvaluate:
    def test_monosemous_corpus_any_sane_system(self, fig1_net):
        corpus = [
            item(pos=i, lemma="road", gold=("road",), cat="A") for i in range(5)
        ]
        system = make_system("first", corpus, WsdConfig(), fig1_net)
        report = evaluate(corpus, system, fig1_net)
        assert report.recall == 1.0
        assert report.coverage == 1.0

    def test_fixed_scores_average(self, fig1_net):
        corpus = [
            item(pos=1, gold=("end1",)),
            item(pos=2, gold=("end1",)),
            item(pos=3, gold=("end2",)),
            item(pos=4, gold=("end1",)),
        ]
        senses = list(fig1_net.senses_of("end"))
        outcomes = {
            1: point_mass_on("end1", senses),                      # 1.0
            2: SenseDistribution(entries=(("end1", 0.5), ("end2", 0.5))),  # 0.5
            3: point_mass_on("end1", senses),                      # 0.0
            4: SenseDistribution(entries=(("end1", 0.5), ("end3", 0.5))),  # 0.5
        }
        report = evaluate(corpus, lambda it: outcomes[it.position], fig1_net)
        assert report.recall == pytest.approx(0.5)

    def test_analytic_random_recall_quarter_for_four_senses(self):
        net = compact(
            "s1\tw\t\t\ns2\tw\t\t\ns3\tw\t\t\ns4\tw\t\t"
        )
        corpus = [item(pos=i, lemma="w", gold=("s1",)) for i in range(10)]
        report = evaluate(
            corpus, lambda it: SenseDistribution(entries=(), abstained=True), net
        )
        assert report.random_recall == pytest.approx(0.25)

    def test_unresolvable_items_counted_and_score_zero(self, fig1_net):
        corpus = [
            item(pos=1, lemma="road", gold=("road",)),
            item(pos=2, lemma="qqqq", gold=("ghost",)),
        ]
        system = make_system("first", corpus, WsdConfig(), fig1_net)
        report = evaluate(corpus, system, fig1_net)
        assert report.unresolvable == 1
        assert report.recall == pytest.approx(0.5)
        assert report.coverage == pytest.approx(0.5)

    def test_recall_not_above_coverage(self, fig1_net):
        corpus = [item(pos=i, gold=("end2",)) for i in range(6)]
        system = make_system("cd", corpus, WsdConfig(), fig1_net)
        report = evaluate(corpus, system, fig1_net)
        assert report.recall <= report.coverage + 1e-12

    def test_category_partition_sums_exactly(self, fig1_net):
        corpus = []
        for i in range(60):
            cat = "ABN"[i % 3]
            corpus.append(
                item(doc=f"br-{cat.lower()}0{i % 7}", cat=cat, pos=i, gold=("end1",))
            )
        system = make_system("cd", corpus, WsdConfig(), fig1_net)
        report = evaluate(corpus, system, fig1_net)
        by_cat = math.fsum(
            cat.system_recall * cat.items for _, cat in report.per_category
        )
        assert by_cat == report.score_sum
        assert sum(cat.items for _, cat in report.per_category) == 60

    def test_improvement_percentage(self, fig1_net):
        corpus = [item(pos=1, lemma="end", gold=("end1",))]
        senses = list(fig1_net.senses_of("end"))
        report = evaluate(
            corpus, lambda it: point_mass_on("end1", senses), fig1_net
        )
        _, cat = report.per_category[0]
        assert cat.random_recall == pytest.approx(1 / 6)
        assert cat.improvement_pct == pytest.approx((1.0 - 1 / 6) / (1 / 6) * 100)

    def test_random_system_deterministic_per_seed(self, fig1_net):
        corpus = [item(pos=i, gold=("end3",)) for i in range(40)]
        r1 = evaluate(corpus, make_system("random", corpus, WsdConfig(), fig1_net, seed=9), fig1_net)
        r2 = evaluate(corpus, make_system("random", corpus, WsdConfig(), fig1_net, seed=9), fig1_net)
        r3 = evaluate(corpus, make_system("random", corpus, WsdConfig(), fig1_net, seed=10), fig1_net)
        assert r1 == r2
        assert r1 != r3

    def test_random_system_requires_seed(self, fig1_net):
        with pytest.raises(ValueError, match="seed"):
            make_system("random", [], WsdConfig(), fig1_net)

    def test_density_system_threads_do_not_change_results(self, fig1_net):
        corpus = []
        for d in range(4):
            for i in range(8):
                corpus.append(
                    item(doc=f"br-a0{d}", pos=i, gold=("end2",))
                )
        sequential = make_system("cd", corpus, WsdConfig(), fig1_net, threads=1)
        threaded = make_system("cd", corpus, WsdConfig(), fig1_net, threads=4)
        for it in corpus:
            assert sequential(it) == threaded(it)

    def test_empty_corpus(self, fig1_net):
        report = evaluate([], lambda it: None, fig1_net)
        assert report.total_items == 0
        assert report.recall == 0.0


class TestIngestSemcor:
    def test_sample_document(self, fig1_net, data_dir):
        with open(data_dir / "semcor" / "br-a01", "rb") as fh:
            result = ingest_semcor(fh, fig1_net)
        by_pos = {it.position: it for it in result.items}
        assert set(by_pos) == {1, 4, 6, 9}
        assert by_pos[1].gold == frozenset({"end4"})
        assert by_pos[4].gold == frozenset({"road"})
        assert by_pos[9].gold == frozenset({"end1", "end2"})
        assert all(it.category == "A" for it in result.items)
        reasons = {r.position: r.reason for r in result.rejects}
        assert set(reasons) == {7, 8, 10}
        assert "out of range" in reasons[7]
        assert "not in lexicon" in reasons[8]
        assert "no sense annotation" in reasons[10]

    def test_rows_only_for_nouns(self, fig1_net, data_dir):
        with open(data_dir / "semcor" / "br-a01", "rb") as fh:
            result = ingest_semcor(fh, fig1_net)
        lemmas = {it.lemma for it in result.items}
        assert "run" not in lemmas  # the VB word form is skipped

    def test_plural_noun_tag_counts(self, fig1_net, data_dir):
        with open(data_dir / "semcor" / "br-n05", "rb") as fh:
            result = ingest_semcor(fh, fig1_net)
        assert [it.lemma for it in result.items] == ["fabric", "end"]
        assert result.items[1].gold == frozenset({"end5"})
        assert result.items[0].category == "N"

    def test_unparseable_file_reports_offset(self, fig1_net):
        with pytest.raises(SemcorParseError, match="byte"):
            ingest_semcor(io.StringIO("<p>no context here</p>"), fig1_net)

    def test_unrecognizable_doc_id(self, fig1_net):
        text = "<context filename=whatever>\n"
        with pytest.raises(SemcorParseError, match="whatever"):
            ingest_semcor(io.StringIO(text), fig1_net)


class TestSweep:
    @pytest.fixture()
    def tiny_corpus(self):
        return corpus_from(
            "br-a01\tA\t1\tend\tend4\n"
            "br-a01\tA\t2\troad\troad\n"
            "br-n05\tN\t1\tend\tend5\n"
            "br-n05\tN\t2\tfabric\tfabric\n"
        )

    def test_single_config_grid(self, fig1_net, tiny_corpus):
        rows = sweep(tiny_corpus, fig1_net, WsdConfig(), {"window": [5]})
        assert list(rows) == ["window"]
        assert len(rows["window"]) == 1
        assert rows["window"][0].label == "window=5"

    def test_formula_axis_labels_and_order(self, fig1_net, tiny_corpus):
        rows = sweep(
            tiny_corpus, fig1_net, WsdConfig(), {"formula": ["ar", "sar", "lf", "sdf"]}
        )["formula"]
        assert [r.label for r in rows] == [
            "formula=ar", "formula=sar", "formula=lf", "formula=sdf",
        ]

    def test_deterministic(self, fig1_net, tiny_corpus):
        axes = {"chain-limit": [0, 1, 2, 3], "weighting": ["synsets", "words"]}
        first = sweep(tiny_corpus, fig1_net, WsdConfig(), axes)
        second = sweep(tiny_corpus, fig1_net, WsdConfig(), axes)
        assert first == second

    def test_csv_rendering(self, fig1_net, tiny_corpus):
        rows = sweep(tiny_corpus, fig1_net, WsdConfig(), {"window": [1, 2]})["window"]
        csv = render_sweep_csv(rows)
        lines = csv.strip().split("\n")
        assert lines[0] == "config,recall,coverage"
        assert len(lines) == 3
        assert lines[1].startswith("window=1,")


class TestAxisApplication:
    def test_relations(self):
        cfg, label = apply_axis_value(WsdConfig(), "relations", "hypernym+meronym")
        assert cfg.relations == frozenset(
            {RelationType.HYPERNYM, RelationType.MERONYM}
        )
        assert label == "relations=hypernym+meronym"

    def test_window(self):
        cfg, label = apply_axis_value(WsdConfig(), "window", "25")
        assert cfg.window_radius == 25 and label == "window=25"

    def test_weighting(self):
        cfg, _ = apply_axis_value(WsdConfig(), "weighting", "fractional")
        assert cfg.weighting is Weighting.FRACTIONAL

    def test_unknown_axis(self):
        with pytest.raises(ValueError, match="axis"):
            apply_axis_value(WsdConfig(), "altitude", "1")

    def test_parse_relations_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown relation"):
            parse_relations("hypernym+sideways")


class TestEvaluationCsv:
    def test_shape_and_formatting(self, fig1_net):
        corpus = [
            item(doc="br-a01", cat="A", pos=1, lemma="road", gold=("road",)),
            item(doc="br-n05", cat="N", pos=1, lemma="end", gold=("end1",)),
        ]
        system = make_system("first", corpus, WsdConfig(), fig1_net)
        csv = render_evaluation_csv(evaluate(corpus, system, fig1_net))
        lines = csv.strip().split("\n")
        assert lines[0] == (
            "category,items,random_recall,system_recall,improvement_pct,coverage"
        )
        assert lines[1].startswith("A,1,1.0000,1.0000,")
        assert lines[2].startswith("N,1,0.1667,1.0000,")
        assert lines[-1].startswith("OVERALL,2,")
        for cell in lines[1].split(",")[2:]:
            assert len(cell.split(".")[1]) == 4
