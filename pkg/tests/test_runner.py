import csv

import numpy as np
import pytest

from embalign.core import ExtractionConfig
from embalign.fileio import EmbeddingCorpus, SentenceEmbedding, write_embeddings
from embalign.runner import (
    load_corpus,
    run_corpus,
    run_frequency_bins,
    run_tag_bins,
    sweep,
    write_bins_csv,
    write_score_csv,
    write_sweep_csv,
)

from support import build_fixture_corpus


def run_bytes(fix, cfg, out_path, workers=1):
    run_corpus(fix.src_emb, fix.tgt_emb, cfg, out_path, workers=workers)
    return out_path.read_bytes()


class TestRunCorpus:
    def test_scored_run_produces_report(self, tmp_path, word_corpus):
        report = run_corpus(
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(method="argmax"),
            tmp_path / "out.align",
            gold_path=word_corpus.gold,
            gold_base=1,
            report_path=tmp_path / "scores.csv",
        )
        assert report is not None
        assert 0.0 <= report.aer <= 1.0
        assert report.predicted > 0
        with open(tmp_path / "scores.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert float(rows[0]["f1"]) == pytest.approx(report.f1)
        assert rows[0]["averaging"] == "micro"

    def test_output_lines_match_pair_count(self, tmp_path, word_corpus):
        out = tmp_path / "out.align"
        run_corpus(word_corpus.src_emb, word_corpus.tgt_emb, ExtractionConfig(), out)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == word_corpus.n_pairs

    def test_noisy_permutation_corpus_is_mostly_recovered(self, tmp_path, word_corpus):
        # fixture sources are noisy copies of permuted targets, so argmax
        # should land far above chance
        report = run_corpus(
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(method="argmax"),
            tmp_path / "out.align",
            gold_path=word_corpus.gold,
            gold_base=1,
        )
        assert report.f1 > 0.5

    def test_deterministic_across_runs_and_workers(self, tmp_path, word_corpus):
        cfg = ExtractionConfig(method="itermax", null_enabled=True)
        runs = [
            run_bytes(word_corpus, cfg, tmp_path / f"out{k}.align", workers=1 if k % 2 else 4)
            for k in range(4)
        ]
        assert len(set(runs)) == 1

    def test_id_mismatch_named(self, tmp_path, rng):
        fix = build_fixture_corpus(tmp_path / "a", n_pairs=3)
        vec = rng.normal(size=(2, 6)).astype(np.float32)
        other = EmbeddingCorpus(
            6, "word", (SentenceEmbedding("odd", ("x", "y"), vec),)
        )
        write_embeddings(tmp_path / "other.emb", other)
        with pytest.raises(ValueError, match="count mismatch"):
            load_corpus(fix.src_emb, tmp_path / "other.emb")
        trio = EmbeddingCorpus(
            6,
            "word",
            tuple(
                SentenceEmbedding(sid, ("x", "y"), vec)
                for sid in ("pair0", "odd", "pair2")
            ),
        )
        write_embeddings(tmp_path / "trio.emb", trio)
        with pytest.raises(ValueError, match="'odd'"):
            load_corpus(fix.src_emb, tmp_path / "trio.emb")

    def test_level_mismatch_rejected(self, tmp_path):
        word = build_fixture_corpus(tmp_path / "w", level="word")
        sub = build_fixture_corpus(tmp_path / "s", level="subword")
        with pytest.raises(ValueError, match="level mismatch"):
            load_corpus(word.src_emb, sub.tgt_emb)

    def test_subword_corpus_scores_at_word_level(self, tmp_path, subword_corpus):
        report = run_corpus(
            subword_corpus.src_emb,
            subword_corpus.tgt_emb,
            ExtractionConfig(method="argmax"),
            tmp_path / "out.align",
            gold_path=subword_corpus.gold,
            gold_base=1,
        )
        assert report.f1 > 0.4

    def test_subword_output_level_skips_conversion(self, tmp_path, subword_corpus):
        word_out = tmp_path / "word.align"
        sub_out = tmp_path / "sub.align"
        run_corpus(subword_corpus.src_emb, subword_corpus.tgt_emb, ExtractionConfig(), word_out)
        run_corpus(
            subword_corpus.src_emb,
            subword_corpus.tgt_emb,
            ExtractionConfig(),
            sub_out,
            output_level="subword",
        )
        assert word_out.read_bytes() != sub_out.read_bytes()

    def test_word_corpus_cannot_emit_subword(self, tmp_path, word_corpus):
        with pytest.raises(ValueError, match="subword output"):
            run_corpus(
                word_corpus.src_emb,
                word_corpus.tgt_emb,
                ExtractionConfig(),
                tmp_path / "out",
                output_level="subword",
            )

    def test_fig3_shaped_fixture_converts_to_word_level(self, tmp_path):
        # source words: [a1 a2] [b]; target words: [x] [y] [z]; one-hot
        # embeddings force the subword diagonal, which maps to word edges
        # (0,0), (0,1), (1,2)
        eye = np.eye(3, dtype=np.float32)
        src = EmbeddingCorpus(
            3,
            "subword",
            (SentenceEmbedding("p0", ("a1", "a2", "b"), eye, ((0, 2), (2, 3))),),
        )
        tgt = EmbeddingCorpus(
            3,
            "subword",
            (SentenceEmbedding("p0", ("x", "y", "z"), eye, ((0, 1), (1, 2), (2, 3))),),
        )
        write_embeddings(tmp_path / "src.emb", src)
        write_embeddings(tmp_path / "tgt.emb", tgt)
        out = tmp_path / "out.align"
        run_corpus(tmp_path / "src.emb", tmp_path / "tgt.emb", ExtractionConfig(), out)
        assert out.read_text(encoding="utf-8") == "0-0 0-1 1-2\n"


class TestNeutrality:
    def test_zero_kappa_matches_disabled_distortion(self, tmp_path, word_corpus):
        for method in ("argmax", "itermax", "match"):
            with_dist = run_bytes(
                word_corpus,
                ExtractionConfig(method=method, dist_enabled=True, kappa=0.0),
                tmp_path / f"{method}.dist.align",
            )
            without = run_bytes(
                word_corpus,
                ExtractionConfig(method=method, dist_enabled=False),
                tmp_path / f"{method}.plain.align",
            )
            assert with_dist == without

    def test_percentile_100_matches_disabled_null(self, tmp_path, word_corpus):
        with_null = run_bytes(
            word_corpus,
            ExtractionConfig(method="itermax", null_enabled=True, null_percentile=100.0),
            tmp_path / "null.align",
        )
        without = run_bytes(
            word_corpus, ExtractionConfig(method="itermax"), tmp_path / "plain.align"
        )
        assert with_null == without

    def test_strict_percentile_removes_edges(self, tmp_path, word_corpus):
        harsh = run_bytes(
            word_corpus,
            ExtractionConfig(null_enabled=True, null_percentile=40.0),
            tmp_path / "harsh.align",
        )
        plain = run_bytes(word_corpus, ExtractionConfig(), tmp_path / "plain.align")
        assert sum(len(l.split()) for l in harsh.decode().splitlines()) < sum(
            len(l.split()) for l in plain.decode().splitlines()
        )


class TestSweep:
    def test_n_max_sweep_first_row_equals_argmax(self, tmp_path, word_corpus):
        rows = sweep(
            "n_max",
            [1, 2, 3],
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            word_corpus.gold,
        )
        argmax_report = run_corpus(
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(method="argmax"),
            tmp_path / "o",
            gold_path=word_corpus.gold,
        )
        assert rows[0][0] == 1
        assert rows[0][1] == argmax_report
        # more iterations only add edges
        assert rows[0][1].predicted <= rows[1][1].predicted <= rows[2][1].predicted

    def test_kappa_zero_row_equals_no_distortion(self, tmp_path, word_corpus):
        rows = sweep(
            "kappa",
            [0.0, 0.5],
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            word_corpus.gold,
        )
        plain = run_corpus(
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            tmp_path / "o",
            gold_path=word_corpus.gold,
        )
        assert rows[0][1] == plain

    def test_percentile_100_row_equals_no_null(self, tmp_path, word_corpus):
        rows = sweep(
            "null_percentile",
            [100.0, 60.0],
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            word_corpus.gold,
        )
        plain = run_corpus(
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            tmp_path / "o",
            gold_path=word_corpus.gold,
        )
        assert rows[0][1] == plain
        assert rows[1][1].predicted <= plain.predicted

    def test_layer_sweep_uses_path_template(self, tmp_path):
        for layer in (0, 8):
            build_fixture_corpus(tmp_path / f"L{layer}", seed=1000 + layer)
        fix0 = build_fixture_corpus(tmp_path / "L0", seed=1000)
        rows = sweep(
            "layer",
            [0, 8],
            str(tmp_path / "L{layer}" / "src.word.emb"),
            str(tmp_path / "L{layer}" / "tgt.word.emb"),
            ExtractionConfig(),
            fix0.gold,
        )
        assert len(rows) == 2
        assert rows[0][0] == 0 and rows[1][0] == 8

    def test_unknown_param_rejected(self, word_corpus):
        with pytest.raises(ValueError, match="unknown sweep parameter"):
            sweep(
                "beta",
                [1],
                word_corpus.src_emb,
                word_corpus.tgt_emb,
                ExtractionConfig(),
                word_corpus.gold,
            )


class TestBinsPlumbing:
    def make_inputs(self, tmp_path):
        (tmp_path / "hyp").write_text("0-0 1-1\n0-1\n", encoding="utf-8")
        (tmp_path / "gold").write_text("1-1 2-2\n1-2\n", encoding="utf-8")
        (tmp_path / "src.txt").write_text("the house\nbig tree\n", encoding="utf-8")
        (tmp_path / "tgt.txt").write_text("das haus\ngrosser baum\n", encoding="utf-8")
        (tmp_path / "freq").write_text(
            "the 1000\nhouse 4\ndas 900\nhaus 2\nbig 50\ntree 60\ngrosser 40\nbaum 70\n",
            encoding="utf-8",
        )
        (tmp_path / "src.tags").write_text("DET NOUN\nADJ NOUN\n", encoding="utf-8")
        (tmp_path / "tgt.tags").write_text("DET NOUN\nADJ NOUN\n", encoding="utf-8")

    def test_frequency_bins_end_to_end(self, tmp_path):
        self.make_inputs(tmp_path)
        reports = run_frequency_bins(
            tmp_path / "hyp",
            tmp_path / "gold",
            1,
            tmp_path / "src.txt",
            tmp_path / "tgt.txt",
            tmp_path / "freq",
            [(0, 10), (10, float("inf"))],
        )
        assert len(reports) == 2
        # edges touching 'house'/'haus' (freq<10) land in the low bin
        assert reports[0].report.predicted == 1
        assert reports[1].report.predicted == 2

    def test_tag_bins_end_to_end(self, tmp_path):
        self.make_inputs(tmp_path)
        reports = {r.label: r for r in run_tag_bins(
            tmp_path / "hyp", tmp_path / "gold", 1, tmp_path / "src.tags", tmp_path / "tgt.tags"
        )}
        assert set(reports) == {"DET", "NOUN", "ADJ"}
        assert reports["NOUN"].report.sure >= 1

    def test_line_count_mismatch(self, tmp_path):
        self.make_inputs(tmp_path)
        (tmp_path / "short.txt").write_text("one line\n", encoding="utf-8")
        with pytest.raises(ValueError, match="one line per sentence"):
            run_frequency_bins(
                tmp_path / "hyp",
                tmp_path / "gold",
                1,
                tmp_path / "short.txt",
                tmp_path / "tgt.txt",
                tmp_path / "freq",
                [(0, float("inf"))],
            )


class TestCsvWriters:
    def test_sweep_csv_shape(self, tmp_path, word_corpus):
        rows = sweep(
            "alpha",
            [0.9, 1.0],
            word_corpus.src_emb,
            word_corpus.tgt_emb,
            ExtractionConfig(),
            word_corpus.gold,
        )
        write_sweep_csv(tmp_path / "sweep.csv", "alpha", rows)
        with open(tmp_path / "sweep.csv", newline="") as fh:
            records = list(csv.DictReader(fh))
        assert [r["value"] for r in records] == ["0.9", "1.0"]
        assert all(r["param"] == "alpha" for r in records)
        assert all(0.0 <= float(r["aer"]) <= 1.0 for r in records)

    def test_bins_csv_shape(self, tmp_path):
        from embalign.evaluate import BinReport, ScoreReport

        reports = [
            BinReport("[0,10)", ScoreReport.from_counts(2, 2, 1, 2)),
            BinReport("[10,inf)", ScoreReport.from_counts(0, 0, 0, 0)),
        ]
        write_bins_csv(tmp_path / "bins.csv", "freq", reports)
        with open(tmp_path / "bins.csv", newline="") as fh:
            records = list(csv.DictReader(fh))
        assert records[0]["bin"] == "[0,10)"
        assert records[1]["empty"] == "True"

    def test_score_csv_single_row(self, tmp_path):
        from embalign.evaluate import ScoreReport

        write_score_csv(tmp_path / "s.csv", [({}, ScoreReport.from_counts(1, 1, 1, 1))])
        content = (tmp_path / "s.csv").read_text(encoding="utf-8")
        assert content.splitlines()[0].startswith("precision,recall,f1,aer")
