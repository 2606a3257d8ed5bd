from fractions import Fraction

import numpy as np
import pytest

from rankrls import exact
from rankrls.metrics import min_norm_lstsq
from rankrls.scalars import FLOAT64, RATIONAL, CapabilityError
from rankrls.solver import EpsPolicy, RecursiveSolver, solve_batch


def random_rank_stream(rng, n, m, r):
    """An n x m float matrix of rank exactly r plus targets.

    The first r rows are orthogonal with moderate scales and the rest are
    random combinations of them, so the stored basis stays well conditioned
    and the dependency classification is unambiguous; the auto threshold only
    accounts for rounding propagation, not conditioning amplification.
    """
    q, _ = np.linalg.qr(rng.standard_normal((m, r)))
    head = rng.uniform(0.5, 2.0, r)[:, None] * q.T
    if n > r:
        tail = rng.standard_normal((n - r, r)) @ head
        A = np.vstack([head, tail])
    else:
        A = head[:n]
    return A, rng.standard_normal(n)


# -- construction --------------------------------------------------------


def test_new_solver_empty_state():
    s = RecursiveSolver(3)
    assert s.rank == 0 and s.num_observations == 0
    assert np.array_equal(s.solution, np.zeros(3))
    C, D, P = s.basis()
    assert C.shape == (0, 3) and D.shape == (0, 3) and P.shape == (0, 0)


def test_new_solver_rational_empty_state():
    s = RecursiveSolver(1, eps=EpsPolicy.exact_zero(), scalar=RATIONAL)
    assert s.rank == 0
    assert s.solution[0] == Fraction(0)


def test_orthonormal_requires_sqrt_capability():
    with pytest.raises(CapabilityError):
        RecursiveSolver(2, variant="orthonormal", scalar=RATIONAL)


def test_eps_policy_kind_mismatch():
    with pytest.raises(ValueError):
        RecursiveSolver(2, eps=EpsPolicy.exact_zero())  # float scalars
    with pytest.raises(ValueError):
        RecursiveSolver(2, eps=EpsPolicy.auto(), scalar=RATIONAL)
    with pytest.raises(ValueError):
        RecursiveSolver(0)
    with pytest.raises(ValueError):
        RecursiveSolver(2, variant="qr")


def test_eps_policy_values():
    eps_m = FLOAT64.machine_epsilon
    assert EpsPolicy.auto().threshold(10, 3, eps_m) == (100 * 3 + 30 + 10) * eps_m
    assert EpsPolicy.fixed(1e-8).threshold(10, 3, eps_m) == 1e-8
    assert EpsPolicy.exact_zero().threshold(10, 3, None) == 0.0
    with pytest.raises(ValueError):
        EpsPolicy.fixed(-1.0)
    with pytest.raises(ValueError):
        EpsPolicy("auto", 0.5)


# -- projection ----------------------------------------------------------


def test_project_axis_aligned():
    s = RecursiveSolver(3)
    s.update([1, 0, 0], 0.0)
    proj = s.project([2, 3, 0])
    assert np.allclose(proj.coords, [2])
    assert np.allclose(proj.rejection, [0, 3, 0])
    assert proj.rejection_sq_norm == pytest.approx(9.0)


def test_project_empty_state_everything_is_rejection():
    s = RecursiveSolver(2)
    proj = s.project([1, 2])
    assert proj.coords.shape == (0,)
    assert np.allclose(proj.rejection, [1, 2])


def test_project_in_span_vector():
    s = RecursiveSolver(3)
    s.update([1, 0, 0], 0.0)
    proj = s.project([5, 0, 0])
    assert np.allclose(proj.coords, [5])
    assert np.allclose(proj.rejection, [0, 0, 0])


def test_project_dimension_mismatch():
    with pytest.raises(ValueError):
        RecursiveSolver(3).project([1, 2])


# -- dependency classification -------------------------------------------


def test_zero_rejection_is_dependent():
    s = RecursiveSolver(3)
    s.update([1, 0, 0], 0.0)
    proj = s.project([5, 0, 0])
    assert s.is_dependent(proj, np.array([5.0, 0, 0]))


def test_large_rejection_is_independent():
    s = RecursiveSolver(3)
    s.update([1, 0, 0], 0.0)
    proj = s.project([2, 3, 0])
    assert not s.is_dependent(proj, np.array([2.0, 3, 0]))


def test_exact_zero_policy_ignores_magnitude():
    s = RecursiveSolver(3, scalar=RATIONAL)
    s.update([1, 0, 0], 0)
    tiny = [0, Fraction(1, 10**90), 0]
    proj = s.project(tiny)
    assert not s.is_dependent(proj, RATIONAL.vector(tiny))


# -- update sequence (hand-checked) ----------------------------------------


def test_update_sequence():
    s = RecursiveSolver(2)
    rep = s.update([1, 0], 2.0)
    assert rep.branch == "independent" and rep.new_rank == 1
    assert np.allclose(s.solution, [2, 0])

    rep = s.update([1, 0], 4.0)
    assert rep.branch == "dependent" and rep.new_rank == 1
    assert np.allclose(rep.gain, [0.5, 0])
    assert np.allclose(s.solution, [3, 0])

    rep = s.update([1, 1], 5.0)
    assert rep.branch == "independent" and rep.new_rank == 2
    assert np.allclose(rep.gain, [0, 1])  # rejection (0, 1) over its norm
    assert np.allclose(s.solution, [3, 2])
    assert s.num_observations == 3


def test_update_minimum_norm_single_row():
    s = RecursiveSolver(2)
    s.update([1, 1], 2.0)
    assert np.allclose(s.solution, [1, 1])


def test_update_report_identity():
    s = RecursiveSolver(2)
    s.update([1, 0], 2.0)
    before = s.solution.copy()
    rep = s.update([1, 1], 5.0)
    assert np.allclose(before + rep.gain * rep.predicted_residual, s.solution)


def test_zero_observation_is_dependent_noop():
    s = RecursiveSolver(2)
    rep = s.update([0, 0], 7.0)
    assert rep.branch == "dependent" and s.rank == 0
    assert np.allclose(rep.gain, [0, 0])
    assert np.allclose(s.solution, [0, 0])
    s.update([1, 0], 2.0)
    x = s.solution.copy()
    rep = s.update([0, 0], -3.0)
    assert rep.branch == "dependent"
    assert np.array_equal(s.solution, x)


def test_update_rejects_bad_input():
    s = RecursiveSolver(2)
    with pytest.raises(ValueError):
        s.update([1, 2, 3], 0.0)
    with pytest.raises(ValueError):
        s.update([np.nan, 0], 0.0)
    with pytest.raises(ValueError):
        s.update([1, 0], np.inf)


# -- solve_batch ----------------------------------------------------------


def test_solve_batch_identity():
    x, rank = solve_batch(np.eye(2), [3, 4])
    assert np.allclose(x, [3, 4]) and rank == 2


def test_solve_batch_consistent_rank_one():
    x, rank = solve_batch([[1, 0], [2, 0]], [1, 2])
    assert np.allclose(x, [1, 0]) and rank == 1


def test_solve_batch_averages_inconsistent_duplicates():
    x, rank = solve_batch([[1, 0], [1, 0]], [0, 2])
    assert np.allclose(x, [1, 0]) and rank == 1


def test_solve_batch_row_count_mismatch():
    with pytest.raises(ValueError):
        solve_batch(np.eye(2), [1, 2, 3])


def test_ingest_equals_update_fold_exactly():
    rng = np.random.default_rng(17)
    for variant in ("general", "orthogonal", "orthonormal"):
        A, y = random_rank_stream(rng, 40, 12, 5)
        folded = RecursiveSolver(12, variant=variant)
        for row, t in zip(A, y):
            folded.update(row, t)
        batched = RecursiveSolver(12, variant=variant)
        batched.ingest(A, y)
        assert np.array_equal(folded.solution, batched.solution)
        assert folded.rank == batched.rank


def test_accessors_are_read_only():
    s = RecursiveSolver(2)
    s.update([1, 0], 1.0)
    with pytest.raises(ValueError):
        s.solution[0] = 5.0
    C, D, P = s.basis()
    for view in (C, D, P):
        with pytest.raises(ValueError):
            view[0, 0] = 5.0


# -- invariants ------------------------------------------------------------


def tol(m, r, scale):
    return max(4 * m * max(r, 1) * FLOAT64.machine_epsilon * scale, 1e-300)


def test_oracle_equivalence_on_random_streams():
    rng = np.random.default_rng(100)
    for trial in range(30):
        n = int(rng.integers(1, 36))
        m = int(rng.integers(1, 30))
        r = int(rng.integers(1, min(n, m) + 1))
        A, y = random_rank_stream(rng, n, m, r)
        want = min_norm_lstsq(A, y)
        for variant in ("general", "orthogonal", "orthonormal"):
            x, got_rank = solve_batch(A, y, variant=variant)
            scale = max(1.0, np.abs(want).max())
            assert np.abs(x - want).max() <= 1e-8 * scale, (trial, variant)
            assert got_rank == r


def test_rational_matches_exact_elimination():
    rng = np.random.default_rng(3)
    for _ in range(12):
        n, m = (int(v) for v in rng.integers(1, 7, 2))
        r = int(rng.integers(1, min(n, m) + 1))
        A = rng.integers(-3, 4, (n, r)) @ rng.integers(-3, 4, (r, m))
        y = [Fraction(int(v), int(q)) for v, q in zip(rng.integers(-5, 6, n), rng.integers(1, 5, n))]
        x, rank = solve_batch(A, y, scalar=RATIONAL)
        want = exact.lstsq_min_norm(A, y)
        assert (x == want).all()
        assert rank == exact.rank(A)


def test_dual_invariant_after_every_update():
    rng = np.random.default_rng(8)
    for variant in ("general", "orthogonal", "orthonormal"):
        A, y = random_rank_stream(rng, 25, 10, 6)
        s = RecursiveSolver(10, variant=variant)
        for row, t in zip(A, y):
            s.update(row, t)
            C, D, _ = s.basis()
            r = s.rank
            scale = max(1.0, np.abs(D).max() * np.abs(C).max())
            assert np.abs(np.dot(D, C.T) - np.eye(r)).max() <= tol(10, r, scale)


def test_orthonormal_basis_is_orthonormal_and_self_dual():
    rng = np.random.default_rng(12)
    A, y = random_rank_stream(rng, 20, 8, 5)
    s = RecursiveSolver(8, variant="orthonormal")
    for row, t in zip(A, y):
        s.update(row, t)
        C, D, _ = s.basis()
        assert np.abs(np.dot(C, C.T) - np.eye(s.rank)).max() <= tol(8, s.rank, 1.0)
        assert np.array_equal(C, D)


def test_reingesting_rows_leaves_rank_and_basis_unchanged():
    rng = np.random.default_rng(23)
    A, y = random_rank_stream(rng, 15, 8, 4)
    s = RecursiveSolver(8)
    for row, t in zip(A, y):
        s.update(row, t)
    C_before = s.basis()[0].copy()
    for i in rng.permutation(15):
        rep = s.update(A[i], y[i])
        assert rep.branch == "dependent"
    assert s.rank == 4
    assert np.array_equal(s.basis()[0], C_before)


def test_ingested_rows_project_to_near_zero_rejection():
    rng = np.random.default_rng(31)
    A, y = random_rank_stream(rng, 12, 9, 5)
    s = RecursiveSolver(9)
    for row, t in zip(A, y):
        s.update(row, t)
    for row in A:
        proj = s.project(row)
        scale = float(np.dot(row, row))
        assert float(proj.rejection_sq_norm) <= (tol(9, 5, 10.0)) ** 2 * max(scale, 1.0)


def test_solution_lies_in_row_space():
    rng = np.random.default_rng(37)
    A, y = random_rank_stream(rng, 18, 12, 4)
    s = RecursiveSolver(12)
    s.ingest(A, y)
    x = s.solution.copy()
    proj = s.project(x)
    assert float(proj.rejection_sq_norm) <= 1e-20 * max(1.0, float(np.dot(x, x)))


def test_dependent_update_with_zero_residual_is_noop():
    rng = np.random.default_rng(41)
    A, y = random_rank_stream(rng, 10, 6, 3)
    s = RecursiveSolver(6)
    s.ingest(A, y)
    coeffs = rng.standard_normal(10)
    row = coeffs @ A
    target = float(row @ s.solution)
    x_before = s.solution.copy()
    rep = s.update(row, target)
    assert rep.branch == "dependent"
    assert np.array_equal(s.solution, x_before)


def test_gram_inverse_matches_reconstructed_coordinates():
    rng = np.random.default_rng(47)
    A, y = random_rank_stream(rng, 9, 5, 3)
    s = RecursiveSolver(5)
    s.ingest(A, y)
    C, D, P = s.basis()
    # coordinates of every ingested row in the stored basis
    B = np.array([s.project(row).coords for row in A])
    gram = B.T @ B
    assert np.abs(P @ gram - np.eye(s.rank)).max() <= 1e-8
    assert np.abs(P - P.T).max() <= 1e-12


def test_variants_agree_in_rational_mode():
    rng = np.random.default_rng(53)
    A = rng.integers(-3, 4, (8, 3)) @ rng.integers(-3, 4, (3, 5))
    y = list(rng.integers(-5, 6, 8))
    x_general, _ = solve_batch(A, y, scalar=RATIONAL)
    x_orth, _ = solve_batch(A, y, scalar=RATIONAL, variant="orthogonal")
    assert (x_general == x_orth).all()
    # a rational rescaling keeps exactness too
    x_scaled, _ = solve_batch(A, y, scalar=RATIONAL, variant="orthogonal",
                              alpha=Fraction(2, 3))
    assert (x_general == x_scaled).all()


def test_orthogonal_variant_keeps_gram_diagonal():
    rng = np.random.default_rng(59)
    A, y = random_rank_stream(rng, 20, 7, 5)
    s = RecursiveSolver(7, variant="orthogonal")
    s.ingest(A, y)
    C, _, _ = s.basis()
    gram = C @ C.T
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() <= 1e-9 * np.abs(gram).max()
