import io
import math

import numpy as np
import pytest

from helpers import NINF, empty_instance, three_node, half_int_matrix, leaning_instance
from picncp.maxplus import zeros
from picncp.oracle import (
    bisection_bounds,
    build_lp,
    feasible_at,
    laurent_feasible_at,
    laurent_matrix,
    write_lp_file,
)
from picncp.solver import EMPTY, LambdaInterval, ProblemInstance

INF = math.inf


class TestFeasibleAt:
    def test_example(self):
        inst = three_node()
        assert feasible_at(inst, 3.75)
        assert feasible_at(inst, 3.5) and feasible_at(inst, 4)
        assert not feasible_at(inst, 4.5)
        assert not feasible_at(inst, 3.4)

    def test_empty(self):
        for lam in (-1e6, 0, 17.25):
            assert feasible_at(empty_instance(3), lam)

    def test_non_dyadic_endpoint(self):
        # feasible set [1/3, 1/3]: P-loop of length 3 with weight -1 and an I self-loop of weight 1/3
        P = np.full((3, 3), NINF)
        P[1, 0] = P[2, 1] = 0.0
        P[0, 2] = -1.0
        I = np.full((3, 3), NINF)
        I[0, 0] = 1 / 3
        inst = ProblemInstance(P, I, zeros(3))
        assert feasible_at(inst, 1 / 3)
        assert not feasible_at(inst, 1 / 3 + 1e-6)
        iv = bisection_bounds(inst, tol=1e-9)
        assert abs(iv.lo - 1 / 3) < 1e-9 and abs(iv.hi - 1 / 3) < 1e-9

    def test_infinite_lambda_rejected(self):
        with pytest.raises(ValueError):
            feasible_at(three_node(), INF)


class TestBisection:
    def test_example(self):
        iv = bisection_bounds(three_node(), tol=1e-6)
        assert abs(iv.lo - 3.5) <= 1e-6 and abs(iv.hi - 4) <= 1e-6

    def test_empty_instance(self):
        assert bisection_bounds(empty_instance(2)) == LambdaInterval()

    def test_positive_c(self):
        C = np.array([[NINF, 1.0], [0.0, NINF]])
        assert bisection_bounds(ProblemInstance(zeros(2), zeros(2), C)) == EMPTY

    def test_half_lines(self):
        P = np.array([[-2.0]])
        iv = bisection_bounds(ProblemInstance(P, zeros(1), zeros(1)))
        assert iv.lo == -INF and iv.hi == pytest.approx(2, abs=1e-8)
        I = np.array([[-2.0]])
        iv = bisection_bounds(ProblemInstance(zeros(1), I, zeros(1)))
        assert iv.lo == pytest.approx(-2, abs=1e-8) and iv.hi == INF

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            bisection_bounds(three_node(), tol=0)

    @pytest.mark.parametrize("seed", range(20))
    def test_feasible_set_is_one_run(self, seed):
        """Scanning a grid never shows feasible points on both sides of an infeasible one."""
        rng = np.random.default_rng(40 + seed)
        inst = leaning_instance(rng, int(rng.integers(2, 5)), 0.7)
        flags = [feasible_at(inst, x / 8) for x in range(-160, 161)]
        changes = sum(a != b for a, b in zip(flags, flags[1:]))
        assert changes <= 2
        iv = bisection_bounds(inst)
        for x, f in zip(range(-160, 161), flags):
            assert f == (x / 8 in iv) or min(abs(x / 8 - iv.lo), abs(x / 8 - iv.hi)) < 1e-6


class TestLaurentMatrix:
    def test_evaluation(self):
        A = np.array([[1.0, NINF], [0.0, 2.0]])
        M = laurent_matrix({2: A, -1: A}, 1.5)
        assert np.array_equal(M, [[4.0, NINF], [3.0, 5.0]])
        assert laurent_feasible_at({2: np.array([[-1.0]])}, 0.5)
        assert not laurent_feasible_at({2: np.array([[-1.0]])}, 0.75)


class TestBuildLp:
    def test_counts(self):
        assert build_lp(empty_instance(3)).constraints == []
        assert len(build_lp(three_node()).constraints) == 8
        full = np.zeros((2, 2))
        assert len(build_lp(ProblemInstance(full, full, full)).constraints) == 12

    def test_order_and_coefficients(self):
        m = build_lp(three_node())
        assert [r[0] for r in m.constraints] == ["P", "I", "I", "I", "C", "C", "C", "C"]
        assert m.constraints[0] == ("P", 3, 3, -4.0)
        assert (m.lambda_coef("P"), m.lambda_coef("I"), m.lambda_coef("C")) == (-1, 1, 0)

    def test_bad_objective(self):
        with pytest.raises(ValueError):
            build_lp(three_node(), "sideways")


def _lp_text(inst, objective="minimize"):
    buf = io.StringIO()
    write_lp_file(build_lp(inst, objective), buf)
    return buf.getvalue()


class TestWriteLp:
    def test_empty_model(self):
        text = _lp_text(empty_instance(2))
        lines = text.splitlines()
        assert lines[1:4] == ["Minimize", " obj: lam", "Subject To"]
        assert lines[4] == "Bounds"
        assert lines[-1] == "End"

    def test_rows(self):
        text = _lp_text(three_node())
        assert " P_3_3: - lam >= -4.0" in text
        assert " I_1_2: x1 - x2 + lam >= 0.0" in text
        assert " C_2_1: x2 - x1 >= 2.0" in text
        assert " lam free" in text and " x3 free" in text

    def test_objective_flip(self):
        a = _lp_text(three_node()).splitlines()
        b = _lp_text(three_node(), "maximize").splitlines()
        diff = [(x, y) for x, y in zip(a, b) if x != y]
        assert diff == [("Minimize", "Maximize")]

    def test_constant_only_row(self):
        C = np.array([[-1.0]])
        assert " C_1_1: 0 x1 >= -1.0" in _lp_text(ProblemInstance(zeros(1), zeros(1), C))


@pytest.mark.parametrize("objective, want", [("minimize", 3.5), ("maximize", 4.0)])
def test_lp_solves_to_endpoints(tmp_path, objective, want):
    highspy = pytest.importorskip("highspy")
    path = tmp_path / "model.lp"
    path.write_text(_lp_text(three_node(), objective))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    assert h.getInfo().objective_function_value == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_lp_matches_bisection(tmp_path, seed):
    highspy = pytest.importorskip("highspy")
    rng = np.random.default_rng(70 + seed)
    n = int(rng.integers(2, 5))
    inst = ProblemInstance(half_int_matrix(rng, n, 0.4), half_int_matrix(rng, n, 0.4), leaning_instance(rng, n, 0.5).C)
    ref = bisection_bounds(inst)
    for objective, end in (("minimize", ref.lo), ("maximize", ref.hi)):
        path = tmp_path / f"{objective}.lp"
        path.write_text(_lp_text(inst, objective))
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.readModel(str(path))
        h.run()
        status = h.getModelStatus()
        if ref.is_empty:
            assert status == highspy.HighsModelStatus.kInfeasible
        elif math.isinf(end):
            assert status in (highspy.HighsModelStatus.kUnbounded, highspy.HighsModelStatus.kUnboundedOrInfeasible)
        else:
            assert status == highspy.HighsModelStatus.kOptimal
            assert h.getInfo().objective_function_value == pytest.approx(end, abs=1e-6)
