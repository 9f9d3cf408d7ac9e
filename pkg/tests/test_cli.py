"""End-to-end command line behaviour: formats, exit codes, determinism."""

import io

import pytest

from spangray.cli import entry

FAN = "5 7\nouter: 0 1 2 3 4\n0 1\n1 2\n0 2\n2 3\n0 3\n3 4\n0 4\n"
DIAMOND = "4 5\nouter: 0 1 2 3\n0 1\n1 2\n0 2\n2 3\n0 3\n"
K4 = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
BOWTIE = "5 6\n0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n"
DIRECTED = "3 4\ndirected\n0 1\n1 2\n2 0\n1 0\n"


def run(argv):
    buf = io.StringIO()
    rc = entry(argv, out=buf)
    return rc, buf.getvalue()


@pytest.fixture
def fan_file(tmp_path):
    p = tmp_path / "fan.txt"
    p.write_text(FAN)
    return str(p)


class TestLabel:
    def test_fan_output(self, fan_file):
        rc, out = run(["label", fan_file])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "root: dart (1,0) of edge 0"
        assert lines[1] == "edge (0,1) [id 0] -> label 1"
        assert lines[7] == "edge (0,4) [id 6] -> label 7"

    def test_root_option_changes_labels(self, fan_file):
        rc0, out0 = run(["label", fan_file])
        rc1, out1 = run(["label", fan_file, "--root", "5"])
        assert rc0 == rc1 == 0
        assert out0 != out1

    def test_per_block(self, tmp_path):
        p = tmp_path / "bowtie.txt"
        p.write_text(BOWTIE)
        rc, out = run(["label", str(p), "--per-block"])
        assert rc == 0
        assert out.count("block ") == 2
        assert out.count("label 1") == 2  # each block labels from 1

    def test_not_two_connected_without_per_block(self, tmp_path):
        p = tmp_path / "bowtie.txt"
        p.write_text(BOWTIE)
        rc, _ = run(["label", str(p)])
        assert rc == 2


class TestGen:
    def test_fan_summary(self, fan_file):
        rc, out = run(["gen", fan_file])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "1101010"
        assert lines[-1] == ("# trees=21 expected=21 complete=yes genlex=yes "
                             "all-pivot=yes all-face=yes all-paf=yes "
                             "all-pof=yes")
        assert len(lines) == 42

    def test_prefer_pivot_all_pivot(self, fan_file):
        rc, out = run(["gen", fan_file, "--tiebreak", "prefer-pivot"])
        assert rc == 0
        assert "all-pivot=yes" in out.splitlines()[-1]

    def test_closest_all_paf(self, fan_file):
        rc, out = run(["gen", fan_file, "--tiebreak", "closest", "--initial",
                       "1,2,4,6"])
        assert rc == 0
        assert "all-paf=yes" in out.splitlines()[-1]

    def test_max_trees(self, fan_file):
        rc, out = run(["gen", fan_file, "--max-trees", "5"])
        assert rc == 0
        assert "trees=5" in out.splitlines()[-1]
        assert "complete=no" in out.splitlines()[-1]

    def test_deterministic(self, fan_file):
        _, a = run(["gen", fan_file])
        _, b = run(["gen", fan_file])
        assert a == b

    def test_nonouterplanar_rejected(self, tmp_path):
        p = tmp_path / "k4.txt"
        p.write_text(K4)
        rc, _ = run(["gen", str(p)])
        assert rc == 2

    def test_bad_initial(self, fan_file):
        rc, _ = run(["gen", fan_file, "--initial", "1,2,3,4"])
        assert rc == 2

    def test_missing_file(self):
        rc, _ = run(["gen", "/nonexistent/graph.txt"])
        assert rc == 2


class TestVerify:
    def test_roundtrip(self, fan_file, tmp_path):
        _, listing = run(["gen", fan_file, "--tiebreak", "prefer-pof"])
        lp = tmp_path / "listing.txt"
        lp.write_text(listing)
        rc, out = run(["verify", fan_file, str(lp), "--class", "pof",
                       "--expect-complete"])
        assert rc == 0
        assert "genlex: ok" in out
        assert "exchanges: ok class=pof trees=21" in out

    def test_tampered_tree_fails(self, fan_file, tmp_path):
        _, listing = run(["gen", fan_file])
        lines = listing.splitlines()
        lines[4] = lines[4][::-1]  # reverse one chi line
        lp = tmp_path / "bad.txt"
        lp.write_text("\n".join(lines))
        rc, out = run(["verify", fan_file, str(lp)])
        assert rc == 1
        assert "FAIL" in out

    def test_wrong_class_fails(self, fan_file, tmp_path):
        _, listing = run(["gen", fan_file])  # closest: paf but not face_inner
        lp = tmp_path / "l.txt"
        lp.write_text(listing)
        rc, out = run(["verify", fan_file, str(lp), "--class", "face_inner"])
        assert rc == 1

    def test_malformed_exits_2(self, fan_file, tmp_path):
        lp = tmp_path / "junk.txt"
        lp.write_text("--- what ---\n")
        rc, _ = run(["verify", fan_file, str(lp)])
        assert rc == 2

    def test_incomplete_with_flag_fails(self, fan_file, tmp_path):
        _, listing = run(["gen", fan_file, "--max-trees", "4"])
        lp = tmp_path / "part.txt"
        lp.write_text(listing)
        rc, _ = run(["verify", fan_file, str(lp)])
        assert rc == 0
        rc, _ = run(["verify", fan_file, str(lp), "--expect-complete"])
        assert rc == 1


class TestCount:
    def test_fan(self, fan_file):
        rc, out = run(["count", fan_file])
        assert rc == 0
        assert out.splitlines() == ["t(matrix-tree)=21",
                                    "t(deletion-contraction)=21"]

    def test_fib_line(self, fan_file):
        rc, out = run(["count", fan_file, "--fib"])
        assert rc == 0
        assert out.splitlines()[-1] == \
            "t=21 bound=f_8=21 equality=yes predicate=yes"

    def test_nonouterplanar_counts_without_fib(self, tmp_path):
        p = tmp_path / "k4.txt"
        p.write_text(K4)
        rc, out = run(["count", str(p)])
        assert rc == 0
        assert "t(matrix-tree)=16" in out
        rc, _ = run(["count", str(p), "--fib"])
        assert rc == 2


class TestExperiment:
    def test_paf_stdout(self):
        rc, out = run(["experiment", "--kind", "paf", "--max-n", "4",
                       "--no-timings"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0].startswith("# experiment=paf")
        assert lines[1] == "graph=0 result=cyclic time=0"
        assert lines[-1] == "# summary cyclic=8 discrepancies=0"

    def test_out_file_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        run(["experiment", "--kind", "pivot", "--max-n", "4",
             "--no-timings", "--out", str(p1)])
        run(["experiment", "--kind", "pivot", "--max-n", "4",
             "--no-timings", "--out", str(p2)])
        assert p1.read_text() == p2.read_text()
        assert p1.read_text().endswith("discrepancies=0\n")

    def test_arborescence_ids_carry_roots(self):
        rc, out = run(["experiment", "--kind", "arborescence", "--max-n", "3",
                       "--no-timings"])
        assert rc == 0
        assert "graph=1r0 result=path time=0" in out


class TestFlip:
    def test_text(self, fan_file):
        rc, out = run(["flip", fan_file, "--restriction", "paf"])
        assert rc == 0
        assert out.splitlines()[0] == "nodes=21 edges=59 restriction=paf"

    def test_dot(self, tmp_path, fan_file):
        rc, out = run(["flip", fan_file, "--format", "dot"])
        assert rc == 0
        assert out.startswith("graph flip {")

    def test_out_file(self, tmp_path, fan_file):
        p = tmp_path / "fg.dot"
        rc, out = run(["flip", fan_file, "--format", "dot", "--out", str(p)])
        assert rc == 0
        assert p.read_text().startswith("graph flip {")

    def test_directed(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text(DIRECTED)
        rc, out = run(["flip", str(p), "--root-vertex", "0"])
        assert rc == 0
        assert out.splitlines()[0].startswith("nodes=1")
        rc, _ = run(["flip", str(p)])
        assert rc == 2

    def test_pivot_without_outer_ok(self, tmp_path):
        p = tmp_path / "k4.txt"
        p.write_text(K4)
        rc, out = run(["flip", str(p), "--restriction", "pivot"])
        assert rc == 0
        assert out.splitlines()[0] == "nodes=16 edges=48 restriction=pivot"
        rc, _ = run(["flip", str(p), "--restriction", "face"])
        assert rc == 2
