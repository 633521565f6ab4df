import pytest
from hypothesis import assume, given, strategies as st

from graystruct.dsl import BUILTIN_DSL, DSLSyntaxError, parse_rule, parse_spec, to_dsl
from graystruct.rules import (
    BUILTIN_NAMES,
    Label,
    NotStableError,
    RuleError,
    StabilityCertificate,
    builtin,
    check_stability,
    colorize,
    expected_count,
    iter_builtins,
    reachable_values,
    resolve_builtin,
    same_digit,
    verify_certificate,
)

STABLE = ["catalan", "odd_fibonacci", "t_ary(3)", "omega_r(3)", "schroder_s", "grand_dyck", "factorial_p"]
UNSTABLE = ["fibonacci", "motzkin", "factorial_naive"]


def prod(rule, k):
    return str(rule.production_of(k))


class TestLabel:
    def test_str_and_parse(self):
        assert str(Label(4)) == "4"
        assert str(Label(4, 2)) == "4#2"
        assert Label.parse("4#2") == Label(4, 2)
        assert Label.parse("12") == Label(12)

    @pytest.mark.parametrize("bad", ["", "x", "4#", "#2", "-3"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            Label.parse(bad)

    def test_same_digit_is_lenient_only_about_missing_color(self):
        assert same_digit(Label(4, 1), Label(4))
        assert not same_digit(Label(4, 1), Label(4, 2))
        assert not same_digit(Label(4), Label(5))

    def test_colorize_marks_repeats_only(self):
        assert colorize([3, 3, 4]) == (Label(3, 1), Label(3, 2), Label(4))
        assert colorize([2, 3, 4]) == (Label(2), Label(3), Label(4))

    @given(st.lists(st.integers(1, 6), min_size=1, max_size=12))
    def test_colorize_deterministic_and_distinct(self, values):
        out = colorize(values)
        assert out == colorize(values)
        assert [x.value for x in out] == values
        assert len(set(out)) == len(out)


class TestBuiltins:
    def test_catalan(self):
        r = builtin("catalan")
        assert r.axiom == Label(2)
        for k in range(2, 30):
            assert [c.value for c in r.children(k)] == list(range(2, k + 2))
        c = r.stability
        assert (c.i, c.j, c.c1, c.c2) == (1, 2, Label(2), Label(3))

    def test_motzkin_has_no_certificate(self):
        assert builtin("motzkin").stability is None

    def test_t_ary_two_is_catalan(self):
        t2, cat = builtin("t_ary", t=2), builtin("catalan")
        for k in range(2, 30):
            assert t2.children(k) == cat.children(k)

    def test_production_examples(self):
        assert prod(builtin("catalan"), 3) == "(3) -> (2)(3)(4)"
        assert prod(builtin("schroder_s"), 3) == "(3) -> (3)(4#1)(4#2)"
        assert prod(builtin("grand_dyck"), 2) == "(2) -> (3#1)(3#2)"
        assert prod(builtin("grand_dyck"), 3) == "(3) -> (3#1)(3#2)(4)"
        assert prod(builtin("grand_dyck"), 5) == "(5) -> (3#1)(3#2)(4)(5)(6)"
        assert prod(builtin("factorial_p"), 4) == "(4) -> (2)(4)(6#1)(6#2)"
        assert prod(builtin("odd_fibonacci"), 3) == "(3) -> (2)(3#1)(3#2)"

    @pytest.mark.parametrize("name", STABLE + UNSTABLE)
    def test_arity_matches_label(self, name):
        r = resolve_builtin(name)
        for k in reachable_values(r, 30):
            kids = r.children(k)
            assert len(kids) == k
            assert all(c.value >= 1 for c in kids)
            assert len(set(kids)) == len(kids)

    def test_unreachable_label_rejected(self):
        with pytest.raises(RuleError):
            builtin("factorial_p").children(3)
        with pytest.raises(RuleError):
            builtin("catalan").children(1)

    def test_resolve_forms(self):
        for text in ("t_ary(3)", "t_ary:3", "t_ary=3"):
            assert resolve_builtin(text) is builtin("t_ary", t=3)
        with pytest.raises(RuleError):
            resolve_builtin("no_such_rule")

    def test_parametric_needs_valid_param(self):
        with pytest.raises(RuleError):
            builtin("t_ary", t=1)

    def test_listing_covers_all_families(self):
        names = {r.name for r in iter_builtins()}
        assert {"catalan", "fibonacci", "motzkin", "grand_dyck", "t_ary(3)"} <= names
        assert set(BUILTIN_NAMES) >= {"catalan", "t_ary", "omega_r", "factorial_p"}


class TestStability:
    @pytest.mark.parametrize("name", STABLE)
    def test_certificate_holds_on_every_reachable_label(self, name):
        r = resolve_builtin(name)
        cert = check_stability(r)
        assert isinstance(cert, StabilityCertificate)
        assert cert.i < cert.j
        assert verify_certificate(r, cert) is None

    def test_specific_certificates(self):
        fp = check_stability(builtin("factorial_p"))
        assert (fp.i, fp.j, fp.c1, fp.c2) == (1, 2, Label(2), Label(4))
        gd = check_stability(builtin("grand_dyck"))
        assert (gd.c1, gd.c2) == (Label(3, 1), Label(3, 2))

    @pytest.mark.parametrize("name", UNSTABLE)
    def test_refusal_has_concrete_witness(self, name):
        verdict = check_stability(builtin(name))
        assert not verdict
        assert verdict.witness == (Label(1),)
        assert "1 child" in verdict.reason

    def test_refusal_when_no_common_pair(self):
        # (2) -> (2)(3) but (k) -> (3)..(k+2) for k >= 3: no position keeps its value
        rule = parse_rule("name: drift\naxiom: 2\ncase k=2: 2, 3\ncase k>=3: range(3,k+2)")
        verdict = check_stability(rule)
        assert not verdict
        assert len(verdict.witness) >= 1


class TestCounts:
    def test_registered_sequences(self):
        assert [expected_count("catalan")(n) for n in range(1, 8)] == [1, 2, 5, 14, 42, 132, 429]
        assert [expected_count("t_ary(3)")(n) for n in range(1, 5)] == [1, 3, 12, 55]
        assert [expected_count("factorial_p")(n) for n in range(1, 6)] == [1, 2, 6, 24, 120]
        assert [expected_count("schroder_s")(n) for n in range(1, 5)] == [1, 3, 11, 45]
        assert [expected_count("grand_dyck")(n) for n in range(1, 5)] == [1, 2, 6, 20]
        assert [expected_count("odd_fibonacci")(n) for n in range(1, 6)] == [1, 2, 5, 13, 34]
        assert expected_count("motzkin") is None


class TestDSL:
    def test_catalan_text_matches_builtin(self):
        r = parse_rule("axiom: 2\ncase k>=2: range(2,k), k+1")
        cat = builtin("catalan")
        for k in range(2, 51):
            assert r.children(k) == cat.children(k)
        assert r.stability is not None and (r.stability.c1, r.stability.c2) == (Label(2), Label(3))

    def test_grand_dyck_text_matches_builtin(self):
        src = "name: gd\naxiom: 2\ncase k=2: 3, 3\ncase k=3: 3, 3, 4\ncase k>=4: rep(3,2), range(4,k), k+1"
        r, gd = parse_rule(src), builtin("grand_dyck")
        for k in range(2, 51):
            assert r.children(k) == gd.children(k)

    def test_arity_error(self):
        with pytest.raises(RuleError, match="children"):
            parse_rule("axiom: 2\ncase k>=2: range(2,k)")

    def test_syntax_error_position(self):
        with pytest.raises(DSLSyntaxError) as info:
            parse_rule("axiom: 2\ncase k>=2: range(2,k) +")
        assert (info.value.line, info.value.column) == (2, 23)

    @pytest.mark.parametrize(
        "src",
        [
            "case k>=2: range(2,k), k+1",  # no axiom
            "axiom: 2\ncase k>=2: range(2,k), k+1\ncase k>=3: range(2,k), k+1",
            "axiom: 2\nwhatever",
            "axiom: 2\ncase k>=2: range(2,k), k+1\nstable: i=2 j=1",
        ],
    )
    def test_rejects(self, src):
        with pytest.raises(RuleError):
            parse_rule(src)

    def test_missing_case_for_reachable_label(self):
        with pytest.raises(RuleError):
            parse_rule("axiom: 2\ncase k=2: 2, 3")

    def test_declared_stability_is_checked(self):
        ok = parse_rule("axiom: 2\ncase k>=2: range(2,k), k+1\nstable: i=1 j=2")
        assert ok.stability.i == 1
        with pytest.raises(RuleError):
            parse_rule("axiom: 2\ncase k>=2: range(2,k), k+1\nstable: i=1 j=3")

    def test_general_case_certified_symbolically(self):
        r = parse_rule("axiom: 2\ncase k=2: 2, 3\ncase k>=3: range(2,k), k+1")
        assert r.stability.symbolic
        # a range whose length varies from its first case pins only one position
        assert not parse_rule("axiom: 2\ncase k>=2: range(2,k), k+1").stability.symbolic

    def test_comments_and_blank_lines(self):
        r = parse_rule("# catalan\n\naxiom: 2   # root\ncase k>=2: range(2,k), k+1\n")
        assert r.children(4) == builtin("catalan").children(4)

    @pytest.mark.parametrize("name", sorted(BUILTIN_DSL))
    def test_builtin_texts_agree(self, name):
        r = parse_rule(BUILTIN_DSL[name])
        b = resolve_builtin(name)
        for k in reachable_values(b, 40):
            assert r.children(k) == b.children(k), k
        assert (r.stability is None) == (b.stability is None)

    @pytest.mark.parametrize("name", sorted(BUILTIN_DSL))
    def test_round_trip(self, name):
        text = to_dsl(resolve_builtin(name))
        again = to_dsl(parse_rule(text))
        assert again == text
        assert str(parse_spec(text)) == str(parse_spec(again))

    @given(st.integers(2, 5), st.integers(1, 3))
    def test_generated_families_round_trip(self, t, extra):
        # (k) -> (t)..(k+t-1-extra), then extra copies of (k+t); arity k when k >= t
        assume(extra <= t)
        shift = t - 1 - extra
        hi = f"k+{shift}" if shift >= 0 else f"k-{-shift}"
        src = f"axiom: {t}\ncase k>={t}: range({t},{hi}), rep(k+{t},{extra})"
        r = parse_rule(src)
        assert all(len(r.children(k)) == k for k in reachable_values(r, 20))
        assert to_dsl(parse_rule(to_dsl(r))) == to_dsl(r)
