from fractions import Fraction

import pytest

from fullfield.bundles import BundleError
from fullfield.chiral import ChiralData, fails
from fullfield.fixtures import load_fixture
from fullfield.linalg import identity, mat_eq, mat_mul, transpose
from tests.conftest import get_chiral


class TestPentagon:
    def test_trivial_passes(self, trivial):
        assert not fails(trivial.verify_pentagon())

    def test_all_fixtures_pass(self, fixture_name):
        assert not fails(get_chiral(fixture_name).verify_pentagon())

    def test_negated_entry_located(self):
        chiral = ChiralData(load_fixture("mut_pentagon"))
        bad = fails(chiral.verify_pentagon())
        assert bad
        # the fail records carry the full label tuple of each instance
        assert all(len(r.index) >= 5 for r in bad)


class TestCanonicalWeight:
    def test_trivial_unit(self, trivial):
        assert trivial.f_a("e") == trivial.field.one()

    def test_z2_matches_oracle_fixture(self, z2):
        # the lattice four-point oracle produced this very entry
        from fullfield.lattice import LatticeSpec, derive_f_entry
        val = derive_f_entry(LatticeSpec(1, 8), (1, 0, 1, 1, 1, 0))
        assert z2.f_a("1") == val

    def test_ising_self_dual_equality(self, ising):
        assert ising.f_a("sigma") == ising.f_a("sigma")
        sq = ising.f_a("sigma") * ising.f_a("sigma")
        assert sq == ising.field.rational(Fraction(1, 2))

    def test_dual_equality_all_fixtures(self, fixture_name):
        chiral = get_chiral(fixture_name)
        for a in chiral.fusion.labels:
            assert chiral.f_a(a) == chiral.f_a(chiral.fusion.dual[a])

    def test_missing_entry_rejected(self):
        chiral = ChiralData(load_fixture("mut_pairing"))
        # the canonical weights themselves are intact on this mutation
        assert chiral.f_a("sigma")


def naive_pairing_entry(chiral: ChiralData, space, j: int, i: int):
    """Second, independent contraction of the pairing from raw tensors."""
    a1, a2, a3 = space
    d = chiral.fusion.dual
    e = chiral.fusion.unit
    pr = (d[a1], d[a2], d[a3])
    s23 = chiral.bundle.sigma23[pr]
    total = chiral.field.zero()
    for m in range(len(s23)):
        total = total + s23[m][i] * chiral.bundle.f_entry(
            (d[a1], a3, a2, a1, a2, e), (m, j, 0, 0))
    return total


class TestPairing:
    def test_module_map_pairs_to_one(self, fixture_name):
        chiral = get_chiral(fixture_name)
        e = chiral.fusion.unit
        for a in chiral.fusion.labels:
            assert chiral.pairing_matrix((e, a, a)) == [[chiral.field.one()]]

    def test_vacuum_channel_pairs_to_weight(self, fixture_name):
        chiral = get_chiral(fixture_name)
        e = chiral.fusion.unit
        for a in chiral.fusion.labels:
            ap = chiral.fusion.dual[a]
            assert chiral.pairing_matrix((a, ap, e)) == [[chiral.f_a(a)]]

    def test_ising_sigma_sigma_one_against_naive(self, ising):
        for space in ((("sigma", "sigma", "1")), ("sigma", "sigma", "eps")):
            got = ising.pairing_matrix(space)
            want = naive_pairing_entry(ising, space, 0, 0)
            assert got == [[want]]

    def test_symmetry(self, fixture_name):
        chiral = get_chiral(fixture_name)
        for space in chiral.spaces():
            g = chiral.pairing_matrix(space)
            gp = chiral.pairing_matrix(chiral.primed(space))
            assert mat_eq(gp, transpose(g))

    def test_two_expressions_disagreement_rejected(self):
        # needs a space distinct from its primed partner, so the two fusing
        # expressions see different adjoint matrices
        bundle = load_fixture("z4k2")
        space = ("1", "1", "2")
        mat = bundle.sigma23[space]
        bundle.sigma23 = dict(bundle.sigma23)
        bundle.sigma23[space] = [[3 * v for v in row] for row in mat]
        chiral = ChiralData(bundle)
        with pytest.raises(BundleError, match="disagree"):
            chiral.pairing_matrix(space)

    def test_zero_space_empty_matrix(self, ising):
        assert ising.pairing_matrix(("sigma", "sigma", "sigma")) == []


class TestNondegeneracy:
    def test_all_fixtures(self, fixture_name):
        assert not fails(get_chiral(fixture_name).verify_nondegeneracy())

    def test_trivial_one_by_one(self, trivial):
        assert trivial.pairing_matrix(("e", "e", "e")) == [[trivial.field.one()]]

    def test_zeroed_sigma23_fails_at_space(self):
        chiral = ChiralData(load_fixture("mut_pairing"))
        bad = fails(chiral.verify_nondegeneracy())
        assert any(r.identity == "nondegeneracy" for r in bad)

    def test_dimension_symmetry(self, fixture_name):
        chiral = get_chiral(fixture_name)
        for space in chiral.spaces():
            assert chiral.dim(space) == chiral.dim(chiral.primed(space))

    def test_left_inverse_normalization_nonzero(self, fixture_name):
        chiral = get_chiral(fixture_name)
        for a in chiral.fusion.labels:
            assert chiral.f_a(a)


class TestDualBasis:
    def test_duality_delta(self, fixture_name):
        chiral = get_chiral(fixture_name)
        one, zero = chiral.field.one(), chiral.field.zero()
        for space in chiral.spaces():
            g = chiral.pairing_matrix(space)
            dm = chiral.dual_basis(space)
            assert mat_eq(mat_mul(g, dm), identity(len(g), one, zero))

    def test_canonical_duals(self, fixture_name):
        chiral = get_chiral(fixture_name)
        e = chiral.fusion.unit
        one = chiral.field.one()
        for a in chiral.fusion.labels:
            ap = chiral.fusion.dual[a]
            assert chiral.dual_basis((e, a, a)) == [[one]]
            assert chiral.dual_basis((a, e, a)) == [[one]]
            assert chiral.dual_basis((a, ap, e)) == [[chiral.f_a(a).inverse()]]

    def test_ising_multiply_back(self, ising):
        space = ("sigma", "sigma", "eps")
        g = ising.pairing_matrix(space)
        dm = ising.dual_basis(space)
        assert g[0][0] * dm[0][0] == ising.field.one()

    def test_doubled_coefficient_fails_fusing(self):
        chiral = ChiralData(load_fixture("mut_fusing"))
        assert fails(chiral.verify_prop_fusing())


class TestPropFusing:
    def test_trivial_single_terms(self, trivial):
        assert not fails(trivial.verify_prop_fusing())

    def test_all_fixtures_exact(self, fixture_name):
        assert not fails(get_chiral(fixture_name).verify_prop_fusing())


class TestModifiedForm:
    def test_trivial_all_ones(self, trivial):
        mat, path = trivial.modified_form(("e", "e", "e"))
        assert path == "exact"
        assert mat == [[trivial.field.one()]]

    def test_z2_exact_path(self, z2):
        # the canonical weights are units, so their roots stay in the field
        for space in z2.spaces():
            _, path = z2.modified_form(space)
            assert path == "exact"

    def test_ising_numeric_path_cross_checked(self, ising):
        # sqrt(F_sigma) = 2^(-1/4) is outside Q(zeta_32): numeric fallback
        mat, path = ising.modified_form(("sigma", "sigma", "eps"))
        assert path == "numeric"
        g = ising.pairing_matrix(("sigma", "sigma", "eps"))
        _, s_eps = ising.sqrt_f("eps")
        _, s_sig = ising.sqrt_f("sigma")
        want = s_eps / (s_sig * s_sig) * complex(g[0][0].embed(30))
        assert abs(mat[0][0] - want) < 1e-12

    def test_sqrt_f_square_roundtrip(self, fixture_name):
        chiral = get_chiral(fixture_name)
        for a in chiral.fusion.labels:
            exact, approx = chiral.sqrt_f(a)
            fa = complex(chiral.f_a(a).embed(30))
            assert abs(approx * approx - fa) < 1e-12
            if exact is not None:
                assert exact * exact == chiral.f_a(a)


class TestS3:
    def test_relations_all_fixtures(self, fixture_name):
        assert not fails(get_chiral(fixture_name).verify_s3_relations())

    def test_invariance_all_fixtures(self, fixture_name):
        assert not fails(get_chiral(fixture_name).verify_s3_invariance())

    def test_sigma23_factor_z2(self, z2):
        # the unmodified pairing picks up exactly the canonical-weight ratio
        recs = [r for r in z2.verify_s3_invariance()
                if r.identity == "sigma23-pairing-factor"]
        assert recs and all(r.status == "pass" for r in recs)

    def test_broken_normalization_fails(self):
        chiral = ChiralData(load_fixture("mut_s3"))
        assert fails(chiral.verify_s3_relations())
