"""End-to-end command-line behaviour."""

import pytest

from tvdist import parse_instance, parse_report
from tvdist.cli import main
from tvdist.files import derive_seed


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def product_file(tmp_path, capsys):
    path = tmp_path / "inst.json"
    code, _, err = run(
        capsys, "gen", "--kind", "product", "--n", "4", "--q", "3", "--seed", "5", "--out", str(path)
    )
    assert code == 0, err
    return path


class TestGen:
    def test_writes_parseable_instance(self, product_file):
        inst = parse_instance(product_file.read_text())
        assert inst.kind == "product" and inst.n == 4 and inst.q == 3

    def test_same_seed_same_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run(capsys, "gen", "--kind", "markov", "--n", "3", "--q", "2",
                "--seed", "99", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_bad_parameters(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "gen", "--kind", "product", "--n", "0", "--q", "2",
            "--seed", "1", "--out", str(tmp_path / "x.json")
        )
        assert code == 1
        assert err.startswith("error: parameter:")


class TestEstimate:
    def test_fptas_report(self, product_file, capsys):
        code, out, _ = run(capsys, "estimate", "--input", str(product_file), "--epsilon", "0.1")
        assert code == 0
        report = parse_report(out)
        assert report.mode == "fptas" and report.epsilon == 0.1
        assert 0.0 <= report.estimate <= 1.0

    def test_modes_agree_on_small_instance(self, product_file, capsys):
        _, fptas_out, _ = run(
            capsys, "estimate", "--input", str(product_file), "--epsilon", "0.05"
        )
        _, exact_out, _ = run(capsys, "estimate", "--input", str(product_file), "--mode", "exact")
        _, oracle_out, _ = run(capsys, "estimate", "--input", str(product_file), "--mode", "oracle")
        fptas = parse_report(fptas_out)
        exact = parse_report(exact_out)
        oracle = parse_report(oracle_out)
        assert exact.epsilon is None and oracle.epsilon is None
        assert abs(exact.estimate - oracle.estimate) <= 1e-10
        assert (1 - 0.05) * oracle.estimate - 1e-9 <= fptas.estimate <= oracle.estimate + 1e-9
        assert fptas.instance_digest == exact.instance_digest == oracle.instance_digest

    def test_identical_pair_reports_zero(self, tmp_path, capsys):
        path = tmp_path / "same.json"
        path.write_text(
            '{"kind": "product", "n": 2, "q": 2,'
            ' "p": [[0.5, 0.5], [0.1, 0.9]], "q_dist": [[0.5, 0.5], [0.1, 0.9]]}'
        )
        code, out, _ = run(capsys, "estimate", "--input", str(path), "--epsilon", "0.5")
        assert code == 0
        assert parse_report(out).estimate == 0.0

    def test_worked_instance_modes(self, tmp_path, capsys):
        path = tmp_path / "worked.json"
        path.write_text(
            '{"kind": "product", "n": 2, "q": 2,'
            ' "p": [[0.75, 0.25], [0.75, 0.25]], "q_dist": [[0.25, 0.75], [0.25, 0.75]]}'
        )
        _, exact_out, _ = run(capsys, "estimate", "--input", str(path), "--mode", "exact")
        assert parse_report(exact_out).estimate == 0.5
        _, fptas_out, _ = run(capsys, "estimate", "--input", str(path), "--epsilon", "0.1")
        assert 0.45 <= parse_report(fptas_out).estimate <= 0.5

    def test_markov_estimate(self, tmp_path, capsys):
        path = tmp_path / "chain.json"
        run(capsys, "gen", "--kind", "markov", "--n", "4", "--q", "2", "--seed", "3",
            "--out", str(path))
        code, out, _ = run(capsys, "estimate", "--input", str(path), "--epsilon", "0.2")
        assert code == 0
        assert parse_report(out).mode == "fptas"

    def test_emit_region(self, product_file, tmp_path, capsys):
        region = tmp_path / "region.csv"
        code, _, _ = run(
            capsys, "estimate", "--input", str(product_file), "--epsilon", "0.1",
            "--emit-region", str(region)
        )
        assert code == 0
        lines = region.read_text().strip().splitlines()
        assert lines[0] == "x,y"
        first = [float(v) for v in lines[1].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert first == [0.0, 0.0] and last == [1.0, 1.0]

    def test_region_rejected_for_oracle_mode(self, product_file, tmp_path, capsys):
        code, _, err = run(
            capsys, "estimate", "--input", str(product_file), "--mode", "oracle",
            "--emit-region", str(tmp_path / "r.csv")
        )
        assert code == 1 and err.startswith("error: parameter:")

    def test_missing_epsilon_for_fptas(self, product_file, capsys):
        code, _, err = run(capsys, "estimate", "--input", str(product_file))
        assert code == 1 and err.startswith("error: parameter:")

    def test_bad_epsilon(self, product_file, capsys):
        code, _, err = run(capsys, "estimate", "--input", str(product_file), "--epsilon", "1.5")
        assert code == 1 and err.startswith("error: parameter:")

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "estimate", "--input", str(tmp_path / "nope.json"), "--epsilon", "0.1"
        )
        assert code == 1 and err.startswith("error: io:")

    def test_malformed_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        code, _, err = run(capsys, "estimate", "--input", str(bad), "--epsilon", "0.1")
        assert code == 1 and err.startswith("error: parse:")


class TestBench:
    def test_grid_csv(self, tmp_path, capsys):
        out_path = tmp_path / "bench.csv"
        code, out, _ = run(
            capsys, "bench", "--kind", "product", "--n", "2", "4", "--q", "2", "3",
            "--epsilon", "0.5", "0.1", "--seed", "21", "--out", str(out_path)
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "kind,n,q,epsilon,estimate,d_lb,max_support,elapsed_ms"
        assert len(lines) == 1 + 2 * 2 * 2
        assert out_path.read_text() == out
        # grid order is deterministic: n-major, then q, then epsilon
        firsts = [line.split(",")[1:3] for line in lines[1:]]
        assert firsts == [
            ["2", "2"], ["2", "2"], ["2", "3"], ["2", "3"],
            ["4", "2"], ["4", "2"], ["4", "3"], ["4", "3"],
        ]
        # every row's peak support honors the cell-count ceiling
        from tvdist import build_partition

        for line in lines[1:]:
            _, n, q, eps, _, d_lb, max_support, _ = line.split(",")
            n, q, eps, d_lb = int(n), int(q), float(eps), float(d_lb)
            if d_lb > 0 and n > 1:
                part = build_partition(eps / (2 * n), (eps / (2 * n)) * d_lb)
                assert int(max_support) <= q * part.interval_count

    def test_single_point_matches_estimate(self, tmp_path, capsys):
        seed, n, q, eps = 13, 3, 2, 0.25
        code, out, _ = run(
            capsys, "bench", "--kind", "product", "--n", str(n), "--q", str(q),
            "--epsilon", str(eps), "--seed", str(seed)
        )
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        inst_path = tmp_path / "inst.json"
        run(capsys, "gen", "--kind", "product", "--n", str(n), "--q", str(q),
            "--seed", str(derive_seed(seed, n, q)), "--out", str(inst_path))
        code, est_out, _ = run(
            capsys, "estimate", "--input", str(inst_path), "--epsilon", str(eps)
        )
        report = parse_report(est_out)
        assert float(row[4]) == report.estimate
        assert float(row[5]) == report.d_lb
        assert int(row[6]) == report.max_support
