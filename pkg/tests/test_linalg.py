import random
from fractions import Fraction as F

from tropline import _linalg


def fourier_motzkin_feasible(rows, rhs) -> bool:
    """Exact feasibility of {t : rows . t <= rhs} by variable elimination."""
    ineqs = [([F(c) for c in r], F(b)) for r, b in zip(rows, rhs)]
    nvars = len(rows[0]) if rows else 0
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, b in ineqs:
            c = coeffs[var]
            (pos if c > 0 else neg if c < 0 else rest).append((coeffs, b))
        combined = list(rest)
        for pc, pb in pos:
            for nc, nb in neg:
                lam, mu = -nc[var], pc[var]
                coeffs = [lam * a + mu * c for a, c in zip(pc, nc)]
                combined.append((coeffs, lam * pb + mu * nb))
        ineqs = combined
    return all(b >= 0 for _, b in ineqs)


def test_rref_identifies_pivots():
    rows, pivots = _linalg.rref([[0, 2, 4], [1, 1, 1]])
    assert pivots == [0, 1]
    assert rows == [[F(1), F(0), F(-1)], [F(0), F(1), F(2)]]


def test_kernel_basis_simple():
    # x + y - z = 0 has kernel spanned by (-1, 1, 0) and (1, 0, 1).
    basis = _linalg.kernel_basis([[1, 1, -1]], 3)
    assert len(basis) == 2
    for vec in basis:
        assert vec[0] + vec[1] - vec[2] == 0


def test_kernel_of_empty_system_is_everything():
    assert len(_linalg.kernel_basis([], 4)) == 4


def test_integerize_scales_and_reduces():
    assert _linalg.integerize([F(1, 2), F(1, 3)]) == [3, 2]
    assert _linalg.integerize([F(2), F(4)]) == [1, 2]
    assert _linalg.integerize([F(-1, 2), F(1, 2)]) == [-1, 1]


def test_rank_and_row_span():
    rows = [[1, 1, 0, 0, 0, -1, 0], [0, 0, 1, 0, 0, 0, -1]]
    assert _linalg.rank(rows) == 2
    assert _linalg.in_row_span(rows, [1, 1, 1, 0, 0, -1, -1])
    assert not _linalg.in_row_span(rows, [1, 0, 0, 0, 0, 0, 0])


def test_negative_orthant_feasible_line():
    # Kernel = span{(1, 1)}: every variable can be pushed below -1.
    rows = [[1], [1]]
    t = _linalg.negative_orthant_point(rows)
    assert t is not None
    assert all(sum(F(a) * x for a, x in zip(row, t)) <= -1 for row in rows)


def test_negative_orthant_infeasible_opposites():
    # Variables are t and -t: they cannot both be negative.
    assert _linalg.negative_orthant_point([[1], [-1]]) is None


def test_negative_orthant_two_parameters():
    rows = [[0, -1], [-1, 1], [0, -1], [0, -1], [0, -1], [-1, 0], [0, -1]]
    t = _linalg.negative_orthant_point(rows)
    assert t is not None
    for row in rows:
        assert sum(F(a) * x for a, x in zip(row, t)) <= -1


def test_negative_orthant_empty():
    assert _linalg.negative_orthant_point([]) == []


def test_negative_orthant_against_fourier_motzkin():
    rng = random.Random(71)
    for _ in range(300):
        d = rng.randint(1, 3)
        nrows = rng.randint(1, 6)
        rows = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(nrows)]
        t = _linalg.negative_orthant_point(rows)
        expected = fourier_motzkin_feasible(rows, [-1] * nrows)
        assert (t is not None) == expected, rows
        if t is not None:
            for row in rows:
                assert sum(F(a) * x for a, x in zip(row, t)) <= -1


def test_lattice_canonical_invariance():
    base = [(1, 2), (1, 1)]
    transformed = [(2, 3), (1, 1)]  # column operations preserve the lattice
    assert _linalg.lattice_canonical(base) == _linalg.lattice_canonical(transformed)
    assert _linalg.lattice_canonical([(0, 0)]) == ()
    assert _linalg.lattice_canonical([(0, 4), (0, 6)]) == ((0, 2),)
    assert _linalg.lattice_canonical([(2, 0)]) == ((2, 0),)


def test_lattice_canonical_rank_two():
    canon = _linalg.lattice_canonical([(1, 0), (0, 1)])
    assert canon == ((1, 0), (0, 1))
    sub = _linalg.lattice_canonical([(2, 0), (0, 2)])
    assert sub == ((2, 0), (0, 2))


def test_xgcd():
    g, s, t = _linalg.xgcd(12, 18)
    assert g == 6 and s * 12 + t * 18 == 6
