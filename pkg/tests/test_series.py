import cmath
from fractions import Fraction

import pytest

from rootseries.branch import BranchPoint, get_context
from rootseries.series import (
    BaseFunction,
    MultiIndex,
    Perturbation,
    F_eval,
    base_from_twoterm,
    multi_indices,
    phi_coeff,
    phi_coeff_oracle,
    phi_coeff_twoterm,
    series_coefficients,
    series_eval,
    taylor_coeff,
)
from rootseries.symbolic import AlphaScaled, Ring

SYM = BaseFunction.symbolic(6)
R = SYM.ring
alpha, c1, c2 = R.gen("alpha"), R.gen("c1"), R.gen("c2")


def test_F_at_r_minus_one_is_zero():
    for a in (1, 2, 3):
        assert F_eval(Fraction(5, 2), -1, a, SYM) == R.zero


def test_F_symbolic_x():
    base = BaseFunction.symbolic(3, ("x",))
    S = base.ring
    x = S.gen("x")
    got = F_eval(x, 1, 1, base)
    want = AlphaScaled(x, x * S.gen("alpha") ** -1 * S.gen("c1") ** -2 - 2 * S.gen("c2") * S.gen("c1") ** -3)
    assert got == want


def test_F_linear_base_vanishes():
    lin = BaseFunction.exact([Fraction(3)])
    assert F_eval(0, 1, 1, lin) == lin.ring.zero


def test_F_rejects_bad_a():
    with pytest.raises(ValueError):
        F_eval(1, 2, 0, SYM)


def test_phi_base_case():
    g = Fraction(2, 3)
    pert = Perturbation((Fraction(1), g))
    assert phi_coeff((2,), pert, SYM) == -(alpha ** g) * c1 ** -1
    assert phi_coeff_oracle((2,), pert, SYM) == -(alpha ** g) * c1 ** -1


@pytest.mark.parametrize("g", [Fraction(0), Fraction(1), Fraction(-3, 2), Fraction(1, 3)])
def test_phi_order_two(g):
    pert = Perturbation((g,))
    want = 2 * g * alpha ** (2 * g - 1) * c1 ** -2 - 2 * c2 * alpha ** (2 * g) * c1 ** -3
    assert phi_coeff((1, 1), pert, SYM) == want
    assert phi_coeff_oracle((1, 1), pert, SYM) == want


def test_taylor_coeff_gamma_zero_order_two():
    pert = Perturbation((Fraction(0),))
    assert taylor_coeff((2,), pert, SYM) == -c2 * c1 ** -3
    assert taylor_coeff((2,), pert, SYM, engine="oracle") == -c2 * c1 ** -3
    assert taylor_coeff((1, 0), Perturbation((Fraction(1, 2), Fraction(3))), SYM) == -(alpha ** Fraction(1, 2)) / c1


def test_phi_permutation_invariance():
    pert = Perturbation((Fraction(1, 2), Fraction(-1), Fraction(2)))
    ref = phi_coeff((1, 2, 2, 3), pert, SYM)
    for I in [(2, 1, 3, 2), (3, 2, 2, 1), (2, 3, 1, 2)]:
        assert phi_coeff(I, pert, SYM) == ref
        assert phi_coeff_oracle(I, pert, SYM) == ref


def test_oracle_memo_matches_fresh_recursion():
    pert = Perturbation((Fraction(1, 3), Fraction(-2)))
    for n in multi_indices(2, 4):
        assert phi_coeff_oracle(n, pert, SYM) == phi_coeff_oracle(n, pert, SYM, use_memo=False)


def test_empty_index_rejected():
    pert = Perturbation((Fraction(1),))
    with pytest.raises(ValueError):
        phi_coeff((), pert, SYM)
    with pytest.raises(ValueError):
        taylor_coeff((0,), pert, SYM)
    with pytest.raises(ValueError):
        BaseFunction.exact([0, 1])


def test_multi_indices_order():
    got = [n.n for n in multi_indices(2, 2)]
    assert got == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert MultiIndex((2, 1)).factorial() == 2 and MultiIndex((2, 1)).total == 3


def test_twoterm_first_order():
    T = Ring(("alpha",))
    a = T.gen("alpha")
    g = Fraction(1, 3)
    pert = Perturbation((g,))
    b, beta = -(a ** -2), Fraction(2)
    got = phi_coeff_twoterm((1,), pert, b, beta, a)
    assert got == -(a ** g) / (b * beta * a)


def test_twoterm_numeric_first_order():
    ctx = get_context()
    alpha_pt = BranchPoint.from_complex(cmath.exp(0.4j) * 1.2)
    b = -1 / alpha_pt.value(ctx) ** 3
    got = phi_coeff_twoterm((1,), Perturbation((0.5,)), b, 3, alpha_pt)
    av = alpha_pt.value(ctx)
    want = -(av ** 0.5) / (b * 3 * av ** 2)
    assert abs(got - want) < 1e-13


def test_twoterm_errors():
    a = Ring(("alpha",)).gen("alpha")
    with pytest.raises(ValueError):
        phi_coeff_twoterm((1,), Perturbation((Fraction(1),)), -1, 0, a)
    with pytest.raises(ValueError):
        phi_coeff_twoterm((1,), Perturbation((Fraction(1),)), 0, 2, a)


def test_base_from_twoterm_examples():
    one = BranchPoint(1, 0, 0)
    lin = base_from_twoterm(-1, 1, one, 3)
    assert [complex(c) for c in lin.coeffs] == [-1, 0, 0]
    quad = base_from_twoterm(-1, 2, one, 4)
    assert [complex(c) for c in quad.coeffs] == [-2, -1, 0, 0]
    with pytest.raises(ValueError):
        base_from_twoterm(1, 1, one, 2)


def test_series_eval_at_zero_is_alpha():
    base = BaseFunction.numeric(1.5 + 0.5j, [2, 1, -1])
    pert = Perturbation((0.5, 2 - 1j))
    assert series_eval([0, 0], 4, pert, base) == pytest.approx(1.5 + 0.5j, abs=1e-15)


@pytest.mark.parametrize("order", [1, 3, 6])
def test_series_eval_linear_base(order):
    lin = BaseFunction.numeric(2, [1])
    pert = Perturbation((0,))
    for a in (0.1, -0.3 + 0.2j, 5):
        assert series_eval([a], order, pert, lin) == pytest.approx(2 - a, abs=1e-14)


def test_exact_and_numeric_agree():
    pert_q = Perturbation((Fraction(1, 2), Fraction(-1)))
    pert_f = Perturbation((0.5, -1.0))
    coeffs = [Fraction(3, 2), Fraction(-1, 3), Fraction(2), Fraction(1, 5)]
    exact = BaseFunction.exact(coeffs)
    num = BaseFunction.numeric(BranchPoint(0.8, 1.1, 0), [float(c) for c in coeffs])
    point = {"alpha": BranchPoint(0.8, 1.1, 0)}
    for n in multi_indices(2, 5):
        e = complex(taylor_coeff(n, pert_q, exact).evaluate(point))
        v = complex(taylor_coeff(n, pert_f, num))
        assert abs(e - v) <= 1e-9 * max(1, abs(e))


def test_numeric_closed_form_matches_oracle_complex_gamma():
    pert = Perturbation((0.3 + 0.7j, -1.2))
    base = BaseFunction.numeric(BranchPoint(1.1, -2.0, 1), [0.9 - 0.4j, 1.5, -0.2j, 0.3])
    for n in multi_indices(2, 5):
        a = taylor_coeff(n, pert, base)
        b = taylor_coeff(n, pert, base, engine="oracle")
        assert abs(a - b) <= 1e-12 * max(1, abs(a))


def test_series_coefficients_table():
    base = BaseFunction.numeric(2, [1])
    table = series_coefficients(Perturbation((0, 0)), base, 1)
    assert [n.n for n in table] == [(1, 0), (0, 1)]
    assert all(abs(v + 1) < 1e-15 for v in table.values())


def test_from_polynomial():
    # (z - 1)(z - 3) about z = 1: c1 = -2, c2 = 1
    base = BaseFunction.from_polynomial([3, -4, 1], 1)
    assert [complex(c) for c in base.coeffs] == [-2, 1]
    with pytest.raises(ValueError):
        BaseFunction.from_polynomial([3, -4, 1], 2)
