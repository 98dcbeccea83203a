"""Smoke tests for the Python bindings; the exact heavy checks live in the
C++ suites, so these only exercise the exposed surface end to end."""

import pytest

import jetform as jf


@pytest.fixture
def sg():
    return jf.Context(3, ["u"], ["u"])


def test_parse_print_roundtrip(sg):
    f = sg.parse("1/2*u_x1*u_x2 - cos(u)")
    assert str(f) == "-cos(u) + 1/2*u_x1*u_x2"
    assert sg.parse(str(f)) == f


def test_ring_and_derivative(sg):
    u = sg.parse("u")
    assert (u - u).is_zero()
    assert jf.total_derivative(sg.parse("sin(u)"), 1) == sg.parse("cos(u)*u_x1")
    assert sg.parse("sin(u)^2 + cos(u)^2 - 1").is_zero()


def test_euler_matches_sine_gordon(sg):
    lagr = sg.parse("1/2*u_x1*u_x2 - cos(u)")
    assert jf.euler(lagr, "u", [1, 2]) == sg.parse("sin(u) - u_x1x2")


def test_symmetry_and_build(sg):
    lagr = sg.parse("1/2*u_x1*u_x2 - cos(u)")
    char = {"u": sg.parse("-u_x1x1x1 - 1/2*u_x1^3")}
    report = jf.symmetry_check(char, lagr, [1, 2], certificate=False)
    assert report["is_symmetry"]

    built = jf.build_multiform(lagr, char, 3, [1, 2])
    assert built["p"][3] == lagr
    form = built["form"]
    assert form.coefficient([1, 3]) == sg.parse("1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4")
    d = jf.exterior_derivative(form)
    assert d.coefficient([1, 2, 3]) == built["product"]


def test_divergence_witness(sg):
    f = sg.parse("u_x1*u_x2 + u*u_x1x2")
    witness = jf.div_decompose(f, [1, 2])
    rebuilt = sum(
        (jf.total_derivative(comp, axis) for axis, comp in witness.items()),
        sg.parse("0"),
    )
    assert rebuilt == f
    with pytest.raises(jf.NotADivergenceError):
        jf.div_decompose(sg.parse("u_x1^2"), [1])
    with pytest.raises(jf.NotExactError):
        jf.inv_total_derivative(sg.parse("u_x2"), 1)


def test_reduce_and_closure(sg):
    eom = jf.EOMSystem(
        sg,
        [
            ("u", [1, 1, 0], sg.parse("sin(u)")),
            ("u", [0, 0, 1], sg.parse("u_x1x1x1 + 1/2*u_x1^3")),
        ],
        confluence_order=2,
    )
    assert jf.commuting_check(eom)
    assert jf.reduce_mod_eom(sg.parse("u_x1x1x2"), eom) == sg.parse("cos(u)*u_x1")
    form = jf.KForm(
        sg,
        2,
        {
            (1, 2): sg.parse("1/2*u_x1*u_x2 - cos(u)"),
            (1, 3): sg.parse("1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4"),
            (2, 3): sg.parse(
                "-1/2*u_x2*u_x3 + u_x1x1*u_x1x2 - u_x1x1*sin(u) + 1/2*u_x1^2*cos(u)"
            ),
        },
    )
    report = jf.closure_check(form, eom)
    assert report["closed"] and report["double_zero"]
    assert all(
        jf.reduce_mod_eom(entry["expr"], eom).is_zero()
        for entry in jf.multiform_el_equations(form)
    )


def test_helmholtz(sg):
    assert jf.helmholtz_check([sg.parse("sin(u) - u_x1x2")])
    assert not jf.helmholtz_check([sg.parse("u_x1")])


def test_errors(sg):
    with pytest.raises(jf.ExprSyntaxError):
        sg.parse("u_x9")
    with pytest.raises(jf.ExprSyntaxError):
        sg.parse("w + 1")


def test_corpus_fast_case():
    names = jf.corpus_case_names()
    assert set(names) == {"sg", "akns3", "akns4", "kp", "zero-demo"}
    report = jf.corpus_run("zero-demo")
    assert report["pass"], report
