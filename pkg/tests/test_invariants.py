import pytest
from hypothesis import given, strategies as st

from milnor_forge.ffla import FieldMatrix
from milnor_forge.galg import Element, elementary_abelian_context
from milnor_forge.invariants import (
    ActionMatrix,
    dickson_invariance,
    element_span_contains,
    group_closure,
    group_closure_oracle,
    induced_action,
    invariant_subspace,
    sl2_generators,
    spans_match,
    verify_degree4_invariants,
    verify_degree4_invariants_two,
    weyl_generators,
)
from milnor_forge.milnor import milnor_q
from milnor_forge.report import FAIL


def assert_all_pass(reports):
    bad = [r for r in reports if r.status == FAIL]
    assert not bad, "\n".join(f"{r.check_id}: {r.details}" for r in bad)


class TestWeylGenerators:
    def test_displayed_matrices(self):
        w = weyl_generators(3)
        mats = [g.matrix.entries for g in w.generators]
        assert mats == [
            ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
            ((1, 0, 0), (1, 1, 0), (0, 0, 1)),
            ((1, 0, 0), (0, 1, 0), (1, 0, 1)),
        ]

    def test_same_matrices_at_two(self):
        w2 = weyl_generators(2)
        w3 = weyl_generators(3)
        for a, b in zip(w2.generators, w3.generators):
            assert a.matrix.entries == b.matrix.entries

    def test_generators_invertible(self):
        for p in (2, 3, 5):
            for g in weyl_generators(p).generators:
                assert g.matrix.rank() == 3

    def test_singular_action_rejected(self):
        with pytest.raises(ValueError):
            ActionMatrix(FieldMatrix([[1, 1], [2, 2]], 3), "bad")


class TestInducedAction:
    def test_identity_action(self):
        ctx = elementary_abelian_context(3, 3, 8)
        f = induced_action(FieldMatrix.identity(3, 3), ctx)
        el = ctx.monomial_element({"x1": 1, "z2": 1})
        assert f(el) == el

    def test_shear_moves_z_only(self):
        ctx = elementary_abelian_context(3, 3, 8)
        f = induced_action(weyl_generators(3).generators[2], ctx)
        assert f(ctx.generator("z1")) == ctx.generator("x1") + ctx.generator("z1")
        assert f(ctx.generator("z2")) == ctx.generator("x2") + ctx.generator("z2")
        assert f(ctx.generator("x1")) == ctx.generator("x1")
        assert f(ctx.generator("y1")) == ctx.generator("y1")

    def test_action_then_inverse_is_identity(self):
        ctx = elementary_abelian_context(5, 3, 8)
        g = weyl_generators(5).generators[0]
        f, finv = induced_action(g, ctx), induced_action(g.inverse(), ctx)
        el = ctx.monomial_element({"x1": 1, "y2": 1, "z1": 1}) + ctx.monomial_element(
            {"y2": 2}
        )
        assert finv(f(el)) == el

    def test_rank_mismatch(self):
        ctx = elementary_abelian_context(3, 2, 6)
        with pytest.raises(ValueError):
            induced_action(FieldMatrix.identity(3, 3), ctx)


class TestInvariantDimensions:
    @pytest.mark.parametrize("prime", (3, 5, 7, 11))
    def test_full_subgroup_line(self, prime):
        ctx = elementary_abelian_context(prime, 3, 7)
        inv = invariant_subspace(ctx, 4, weyl_generators(prime))
        assert len(inv) == 1
        q0 = milnor_q(0, ctx)
        spanning = q0(ctx.monomial_element({"x1": 1, "y1": 1, "z1": 1}))
        assert element_span_contains(ctx, 4, inv, spanning)

    @pytest.mark.parametrize("prime", (3, 5))
    def test_subgroup_dimension_three(self, prime):
        ctx = elementary_abelian_context(prime, 3, 7)
        inv = invariant_subspace(ctx, 4, weyl_generators(prime).generators[:2])
        assert len(inv) == 3

    def test_two_dimensions(self):
        ctx = elementary_abelian_context(2, 3, 7)
        assert len(invariant_subspace(ctx, 4, weyl_generators(2))) == 2
        assert len(invariant_subspace(ctx, 4, weyl_generators(2).generators[:2])) == 4

    def test_trivial_group_whole_space(self):
        ctx = elementary_abelian_context(3, 3, 7)
        inv = invariant_subspace(ctx, 4, [])
        assert len(inv) == 15

    @pytest.mark.parametrize("prime", (2, 3, 5))
    def test_inverse_generators_same_subspace(self, prime):
        ctx = elementary_abelian_context(prime, 3, 7)
        gens = weyl_generators(prime).generators
        inverted = [g.inverse() for g in gens]
        a = invariant_subspace(ctx, 4, gens)
        b = invariant_subspace(ctx, 4, inverted)
        assert spans_match(ctx, 4, a, b)

    @pytest.mark.parametrize("prime", (3, 5))
    def test_q1_nonzero_on_invariant_generator(self, prime):
        ctx = elementary_abelian_context(prime, 3, 2 * prime + 6)
        q0, q1 = milnor_q(0, ctx), milnor_q(1, ctx)
        value = q1(q0(ctx.monomial_element({"x1": 1, "y1": 1, "z1": 1})))
        assert not value.is_zero()
        assert value.homogeneous_degree() == 2 * prime + 3


class TestSuites:
    @pytest.mark.parametrize("prime", (3, 5, 7, 11))
    def test_degree4_suite(self, prime):
        reports = verify_degree4_invariants(prime)
        assert_all_pass(reports)
        notes = [r for r in reports if r.check_id == "invariants.sign_convention_note"]
        assert notes and notes[0].status == "note"

    def test_degree4_suite_two(self):
        assert_all_pass(verify_degree4_invariants_two())

    @pytest.mark.parametrize("prime", (2, 3, 5, 7))
    def test_dickson_fixed(self, prime):
        assert_all_pass(dickson_invariance(prime))


class TestClosureOracle:
    @pytest.mark.parametrize("prime,order", [(2, 24), (3, 216), (5, 3000)])
    def test_group_order(self, prime, order):
        w = weyl_generators(prime)
        elements = group_closure(w)
        assert len(elements) == order
        assert order == prime**2 * (prime**3 - prime)

    def test_closure_is_a_group(self):
        w = weyl_generators(3)
        elements = group_closure(w)
        index = {m.entries for m in elements}
        sample = elements[:12]
        for a in sample:
            for b in sample:
                assert (a * b).entries in index

    @pytest.mark.parametrize("prime", (2, 3, 5))
    def test_oracle_suite(self, prime):
        assert_all_pass(group_closure_oracle(prime))

    def test_oracle_rejects_large_prime(self):
        with pytest.raises(ValueError):
            group_closure_oracle(7)

    def test_shape_count_matches_formula(self):
        for prime in (2, 3):
            w = weyl_generators(prime)
            assert w.shape_count() == prime**2 * (prime**3 - prime)


class TestSL2Generation:
    @staticmethod
    def _power(m, k):
        out = FieldMatrix.identity(m.rows, m.modulus)
        for _ in range(k):
            out = out * m
        return out

    @pytest.mark.parametrize("prime", (3, 5, 7))
    def test_conjugation_matrices_power_up_to_shears(self, prime):
        # ((1,-1),(0,1))^(l-1) = ((1,1),(0,1)) and ((-1,0),(1,-1))^(l-1) = ((1,0),(1,1))
        a = FieldMatrix([[1, -1], [0, 1]], prime)
        b = FieldMatrix([[-1, 0], [1, -1]], prime)
        assert self._power(a, prime - 1) == FieldMatrix([[1, 1], [0, 1]], prime)
        assert self._power(b, prime - 1) == FieldMatrix([[1, 0], [1, 1]], prime)

    @pytest.mark.parametrize("prime", (2, 3, 5))
    def test_shears_generate_special_linear_group(self, prime):
        gens = [g.matrix for g in sl2_generators(prime)]
        seen = {m.entries for m in gens}
        frontier = list(gens)
        while frontier:
            new = []
            for a in gens:
                for b in frontier:
                    c = a * b
                    if c.entries not in seen:
                        seen.add(c.entries)
                        new.append(c)
            frontier = new
        assert len(seen) == prime**3 - prime


class TestSL2Fixedness:
    def test_xy_under_shear(self):
        # (x1 + y1) y1 = x1 y1 over an odd prime since y1^2 = 0
        ctx = elementary_abelian_context(3, 2, 6)
        f = induced_action(sl2_generators(3)[0], ctx)
        xy = ctx.monomial_element({"x1": 1, "y1": 1})
        assert f(xy) == xy

    def test_u3_fixed_at_two(self):
        ctx = elementary_abelian_context(2, 2, 4)
        m = ctx.monomial_element
        u3 = m({"x1": 1, "y1": 2}) + m({"x1": 2, "y1": 1})
        for gen in sl2_generators(2):
            assert induced_action(gen, ctx)(u3) == u3


CTXS = {p: elementary_abelian_context(p, 3, 8) for p in (2, 3, 5)}


@st.composite
def ctx_action_element(draw):
    prime = draw(st.sampled_from(sorted(CTXS)))
    ctx = CTXS[prime]
    gens = weyl_generators(prime).generators
    action = draw(st.sampled_from(gens + tuple(g.inverse() for g in gens)))
    el = ctx.zero()
    for _ in range(draw(st.integers(1, 3))):
        d = draw(st.integers(0, 6))
        basis = ctx.basis_of_degree(d)
        if basis:
            mono = draw(st.sampled_from(basis))
            coeff = draw(st.integers(1, prime - 1)) if prime > 2 else 1
            el = el + Element(ctx, {mono: coeff})
    return ctx, action, el


@given(ctx_action_element())
def test_actions_commute_with_bockstein(data):
    ctx, action, el = data
    f = induced_action(action, ctx)
    q0 = milnor_q(0, ctx)
    assert f(q0(el)) == q0(f(el))


@given(ctx_action_element())
def test_invariant_output_is_invariant(data):
    ctx, _, _ = data
    w = weyl_generators(ctx.prime)
    for el in invariant_subspace(ctx, 4, w):
        for g in w.generators:
            assert induced_action(g, ctx)(el) == el
            assert induced_action(g.inverse(), ctx)(el) == el
