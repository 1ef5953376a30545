"""Generator evaluation, normalization, curvature profile, and parsing."""

import numpy as np
import pytest

from qameans.errors import (
    DegenerateSecondDerivative,
    DomainError,
    NotMonotone,
    RangeError,
    SignChange,
    UsageError,
)
from qameans.generators import (
    AffineGenerator,
    AffineOfGenerator,
    ExpGenerator,
    IdentityGenerator,
    LogGenerator,
    PowerGenerator,
    ReflectedGenerator,
    TabulatedGenerator,
    eval_f,
    eval_f1,
    eval_f2,
    invert_f,
    load_table,
    negate_generator,
    normalize,
    parse_generator,
    reflect_generator,
    rho,
    tabulate,
)
from qameans.grids import WorkingInterval

from oracles import fd_first, fd_second


def test_eval_closed_forms(iv):
    # hand values: 3^2 = 9, d/dx ln x at 4 is 0.25, affine has zero curvature
    assert eval_f(PowerGenerator(2.0, iv), 3.0) == 9.0
    assert eval_f1(LogGenerator(iv), 4.0) == 0.25
    assert eval_f2(AffineGenerator(2.0, 5.0, iv), 1.0) == 0.0
    assert eval_f(ExpGenerator(iv), 1.0) == pytest.approx(np.e, rel=1e-15)


def test_eval_vectorized(iv):
    xs = np.array([1.0, 2.0, 4.0])
    out = eval_f(PowerGenerator(0.5, iv), xs)
    assert np.allclose(out, np.sqrt(xs), rtol=1e-15)


def test_eval_outside_domain_raises(iv):
    gen = LogGenerator(iv)
    with pytest.raises(DomainError):
        eval_f(gen, 0.05)
    with pytest.raises(DomainError):
        eval_f1(gen, np.array([1.0, 11.0]))


def test_power_generator_rejects_bad_arguments():
    with pytest.raises(UsageError):
        PowerGenerator(0.0, WorkingInterval(0.1, 10.0))
    with pytest.raises(UsageError):
        PowerGenerator(2.0, WorkingInterval(-1.0, 1.0))
    with pytest.raises(UsageError):
        LogGenerator(WorkingInterval(0.0, 1.0))


def test_derivative_grids_match_finite_differences(iv):
    """Reported f1 and f2 agree with central differences of reported f."""
    xs = iv.grid()
    h = iv.step
    for gen in (PowerGenerator(3.0, iv), LogGenerator(iv), ExpGenerator(iv)):
        f = eval_f(gen, xs)
        f1 = eval_f1(gen, xs)
        f2 = eval_f2(gen, xs)
        # O(h^2) stencils; pointwise relative bound since log is steep at lo
        rel1 = np.abs(fd_first(f, h) - f1)[2:-2] / np.abs(f1)[2:-2]
        rel2 = np.abs(fd_second(f, h) - f2)[2:-2] / np.abs(f2)[2:-2]
        assert np.max(rel1) < 1e-2
        assert np.max(rel2) < 1e-2


def test_normalize_keeps_increasing_generator(iv):
    gen = PowerGenerator(2.0, iv)
    assert normalize(gen) is gen


def test_normalize_flips_decreasing_generator(iv):
    # x^{-1} is decreasing on a positive interval
    gen = PowerGenerator(-1.0, iv)
    ngen = normalize(gen)
    assert ngen is not gen
    assert ngen.is_increasing()
    xs = iv.grid()[::100]
    assert np.allclose(eval_f(ngen, xs), -eval_f(gen, xs), rtol=1e-15)
    # normalizing twice is the identity on the already increasing result
    assert normalize(ngen) is ngen


def test_normalize_rejects_nonmonotone():
    ivq = WorkingInterval(-1.0, 1.0)
    xs = ivq.grid()
    with pytest.raises(NotMonotone):
        # x^2 is not injective through the origin
        TabulatedGenerator(ivq, xs**2, source="parabola")


def test_rho_closed_forms(iv):
    """Curvature ratio f'/f'' for power generators is x/(p-1)."""
    xs = iv.grid()
    for p in (-1.0, 0.5, 2.0, 3.0):
        # rho needs the increasing representative; negation leaves it unchanged
        r = rho(normalize(PowerGenerator(p, iv)))
        assert np.max(np.abs(r.values - xs / (p - 1.0))) < 1e-10 * np.max(
            np.abs(xs / (p - 1.0))
        )
    # ln x: f'/f'' = (1/x)/(-1/x^2) = -x
    r = rho(LogGenerator(iv))
    assert np.max(np.abs(r.values + xs)) < 1e-10 * iv.hi
    # e^x: ratio is identically 1
    r = rho(ExpGenerator(iv))
    assert np.max(np.abs(r.values - 1.0)) < 1e-12


def test_rho_affine_invariance(iv):
    base = PowerGenerator(3.0, iv)
    wrapped = AffineOfGenerator(base, 2.5, -7.0)
    assert np.max(np.abs(rho(wrapped).values - rho(base).values)) < 1e-10 * iv.hi


def test_rho_degenerate_second_derivative(iv):
    with pytest.raises(DegenerateSecondDerivative):
        rho(IdentityGenerator(iv))
    with pytest.raises(DegenerateSecondDerivative):
        rho(AffineGenerator(3.0, -2.0, iv))


def test_rho_sign_change_carries_witness(neither_cubic):
    with pytest.raises(SignChange) as exc:
        rho(neither_cubic)
    w = exc.value.witness
    assert neither_cubic.domain.contains(w["x"])
    # the witness pins either a near-zero or a sign disagreement of f''
    assert "f2" in w


def test_negate_generator_round_trip(iv):
    gen = PowerGenerator(2.0, iv)
    neg = negate_generator(gen)
    xs = iv.grid()[::50]
    assert np.array_equal(eval_f(neg, xs), -eval_f(gen, xs))
    back = negate_generator(neg)
    assert np.array_equal(eval_f(back, xs), eval_f(gen, xs))


def test_reflect_generator_values(iv):
    gen = ExpGenerator(iv)
    ref = reflect_generator(gen)
    assert ref.domain.lo == -iv.hi and ref.domain.hi == -iv.lo
    xs = ref.domain.grid()[::50]
    assert np.array_equal(eval_f(ref, xs), eval_f(gen, -xs))
    assert np.array_equal(eval_f1(ref, xs), -eval_f1(gen, -xs))
    # double reflection unwraps to the original object
    assert reflect_generator(ref) is gen


def test_reflect_distributes_over_affine_wrappers(iv):
    gen = AffineOfGenerator(ExpGenerator(iv), 2.0, 1.0)
    ref = reflect_generator(gen)
    # result stays an affine wrapper, never a nested reflection
    assert not isinstance(ref, ReflectedGenerator)
    xs = ref.domain.grid()[::97]
    assert np.allclose(eval_f(ref, xs), eval_f(gen, -xs), rtol=1e-15)


def test_invert_f_closed_forms(iv):
    assert invert_f(PowerGenerator(2.0, iv), 25.0) == pytest.approx(5.0, abs=1e-12)
    assert invert_f(LogGenerator(iv), 0.0) == pytest.approx(1.0, abs=1e-12)


def test_invert_f_round_trip(iv):
    rng = np.random.default_rng(3)
    gens = [
        PowerGenerator(2.0, iv),
        PowerGenerator(-1.0, iv),
        LogGenerator(iv),
        ExpGenerator(iv),
        tabulate(LogGenerator(iv)),
    ]
    xs = rng.uniform(iv.lo, iv.hi, size=1000)
    for gen in gens:
        back = np.array([invert_f(gen, float(eval_f(gen, x))) for x in xs])
        assert np.max(np.abs(back - xs)) < 1e-9 * iv.span


def test_invert_f_out_of_range(iv):
    with pytest.raises(RangeError):
        invert_f(PowerGenerator(2.0, iv), 101.0)
    with pytest.raises(RangeError):
        # decreasing generator, value above the left endpoint image
        invert_f(PowerGenerator(-1.0, iv), 11.0)


def test_tabulate_round_trip(iv):
    gen = PowerGenerator(3.0, iv)
    tab = tabulate(gen)
    xs = iv.grid()
    assert np.array_equal(tab.values, eval_f(gen, xs))
    assert np.array_equal(tab.f1_values, eval_f1(gen, xs))
    # off-grid evaluation interpolates between exact samples
    mid = 0.5 * (xs[10] + xs[11])
    expected = 0.5 * (tab.values[10] + tab.values[11])
    assert eval_f(tab, mid) == pytest.approx(expected, rel=1e-15)


def test_tabulated_fd_fallback_accuracy(iv13):
    """Derivatives filled by differences track the exact ones at O(h^2)."""
    xs = iv13.grid()
    tab = TabulatedGenerator(iv13, np.exp(xs), source="exp-values-only")
    assert np.max(np.abs(tab.f1_values - np.exp(xs))) < 1e-5 * np.e**3
    assert np.max(np.abs(tab.f2_values[1:-1] - np.exp(xs)[1:-1])) < 1e-4 * np.e**3


def test_parse_generator_grammar(iv):
    assert isinstance(parse_generator("power:2", iv), PowerGenerator)
    assert isinstance(parse_generator("log", iv), LogGenerator)
    assert isinstance(parse_generator("exp", iv), ExpGenerator)
    assert isinstance(parse_generator("id", iv), IdentityGenerator)
    aff = parse_generator("affine:2:-1", iv)
    assert isinstance(aff, AffineGenerator)
    assert eval_f(aff, 1.0) == 1.0


def test_parse_generator_errors(iv):
    for bad in ("power:", "power:x", "affine:1", "affine:a:b", "cosh", ""):
        with pytest.raises(UsageError):
            parse_generator(bad, iv)
    with pytest.raises(UsageError):
        # non-table specs need an interval
        parse_generator("log", None)


def test_load_table_with_and_without_header(tmp_path):
    xs = np.linspace(1.0, 2.0, 11)
    path = tmp_path / "t.csv"
    rows = ["x,f"] + [f"{float(x)!r},{float(x*x)!r}" for x in xs]
    path.write_text("\n".join(rows) + "\n")
    tab = load_table(str(path))
    assert tab.domain.grid_points == 11
    assert eval_f(tab, 1.5) == pytest.approx(2.25, rel=1e-12)

    bare = tmp_path / "bare.csv"
    bare.write_text("\n".join(f"{float(x)!r},{float(x*x)!r}" for x in xs) + "\n")
    tab2 = load_table(str(bare))
    assert np.array_equal(tab2.values, tab.values)


def test_load_table_g_column_fallback_and_comments(tmp_path):
    xs = np.linspace(0.0, 1.0, 6)
    path = tmp_path / "g.csv"
    lines = ["# leading comment to skip", "x,g,g1"]
    lines += [f"{float(x)!r},{float(np.exp(x))!r},{float(np.exp(x))!r}" for x in xs]
    path.write_text("\n".join(lines) + "\n")
    tab = load_table(str(path))
    assert np.array_equal(tab.f1_values, tab.values)


def test_load_table_rejects_bad_grids(tmp_path):
    bad1 = tmp_path / "nonuniform.csv"
    bad1.write_text("x,f\n0,0\n1,1\n3,3\n")
    with pytest.raises(UsageError):
        load_table(str(bad1))
    bad2 = tmp_path / "decreasing-x.csv"
    bad2.write_text("x,f\n2,0\n1,1\n0,2\n")
    with pytest.raises(UsageError):
        load_table(str(bad2))
    bad3 = tmp_path / "nonmonotone-f.csv"
    bad3.write_text("x,f\n0,0\n1,2\n2,1\n")
    with pytest.raises(NotMonotone):
        load_table(str(bad3))
    empty = tmp_path / "empty.csv"
    empty.write_text("# nothing\n")
    with pytest.raises(UsageError):
        load_table(str(empty))
