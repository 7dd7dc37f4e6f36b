"""Concrete fields: builders, effective bounds, prime splitting, class
groups, principality certificates, and per-prime scans."""

import math
from fractions import Fraction

import pytest

from princheb.errors import (
    DataError,
    ExcludedPrime,
    InputError,
    PreconditionError,
)
from princheb.numberfield import (
    bach_sorenson_bound,
    build_generic,
    build_multiquadratic,
    build_quadratic,
    class_group,
    empirical_density,
    field_from_config,
    frobenius,
    ideal_class,
    ideal_norm,
    ideal_power,
    is_principal,
    lenstra_class_bound,
    minkowski_bound,
    principal_certificate,
    principal_order,
    principality_bound,
    scan_primes,
    split_prime,
)
from princheb.numberfield.classgroup import _lattice_class
from princheb.numberfield.ntheory import kronecker, primes_upto, squarefree_part

from . import bqf

CUBIC_CONFIG = {
    "type": "generic",
    "min_poly": [-1, -3, 0, 1],
    "integral_basis": [
        [1, 1], [0, 1], [0, 1],
        [0, 1], [1, 1], [0, 1],
        [0, 1], [0, 1], [1, 1],
    ],
    "index": 1,
    "class_number": 1,
    "frobenius": {
        "conductor": 9,
        "classes": {"1": 0, "2": 1, "4": 2, "5": 2, "7": 1, "8": 0},
    },
}

# Q(sqrt -3) described through the non-maximal generator sqrt -3, index 2
DENSE_INDEX_CONFIG = {
    "type": "generic",
    "min_poly": [3, 0, 1],
    "integral_basis": [[1, 1], [0, 1], [1, 2], [1, 2]],
    "index": 2,
    "class_number": 1,
    "frobenius": {"conductor": 3, "classes": {"1": 0, "2": 1}},
}


@pytest.fixture(scope="module")
def qm5():
    return build_quadratic(-5)


@pytest.fixture(scope="module")
def qm5_cg(qm5):
    return class_group(qm5)


@pytest.fixture(scope="module")
def quartic():
    return build_multiquadratic((-3, 13))


@pytest.fixture(scope="module")
def quartic_cg(quartic):
    return class_group(quartic)


class TestBuilders:
    def test_imaginary_quadratic_shape(self, qm5):
        assert qm5.degree == 2
        assert qm5.discriminant == -20
        assert qm5.signature == (0, 1)
        assert qm5.index == 1
        assert qm5.min_poly == (5, 0, 1)
        assert qm5.galois_group.order == 2

    def test_one_mod_four_uses_half_integer_generator(self):
        K = build_quadratic(13)
        assert K.discriminant == 13
        assert K.min_poly == (-3, -1, 1)
        assert K.signature == (2, 0)

    def test_quadratic_rejects_bad_d(self):
        for d in (0, 1, 12, -4, 50):
            with pytest.raises(InputError):
                build_quadratic(d)

    def test_quartic_shape(self, quartic):
        assert quartic.degree == 4
        assert quartic.discriminant == 1521
        assert quartic.signature == (0, 2)
        assert quartic.galois_group.order == 4
        assert all(
            quartic.galois_group.order_of(g) in (1, 2) for g in range(4)
        )

    def test_quartic_discriminant_is_product_of_subfield_discs(self, quartic):
        def qdisc(d):
            return d if d % 4 == 1 else 4 * d

        assert quartic.discriminant == qdisc(-3) * qdisc(13) * qdisc(-39)

    def test_multiquadratic_rejects_dependent_generators(self):
        with pytest.raises(InputError):
            build_multiquadratic((2, 3, 6))
        with pytest.raises(InputError):
            build_multiquadratic((2, 8))

    def test_multiquadratic_singleton_matches_quadratic(self):
        K = build_multiquadratic((-5,))
        assert K.discriminant == -20
        assert K.degree == 2

    def test_octic_tower(self):
        K = build_multiquadratic((-3, 13, 5))
        assert K.degree == 8
        assert K.galois_group.order == 8
        target = 1
        for mask in range(1, 8):
            prod = 1
            for i, d in enumerate((-3, 13, 5)):
                if mask >> i & 1:
                    prod *= d
            sf = squarefree_part(prod)
            target *= sf if sf % 4 == 1 else 4 * sf
        assert K.discriminant == target

    def test_generic_cubic(self):
        K = build_generic(CUBIC_CONFIG)
        assert K.degree == 3
        assert K.discriminant == 81
        assert K.signature == (3, 0)
        assert K.galois_group.order == 3

    def test_generic_rejects_unknown_keys(self):
        bad = dict(CUBIC_CONFIG)
        bad["regulator"] = 1.0
        with pytest.raises(InputError, match="regulator"):
            build_generic(bad)

    def test_generic_rejects_non_multiplicative_classes(self):
        bad = dict(CUBIC_CONFIG)
        bad["frobenius"] = {
            "conductor": 9,
            "classes": {"1": 0, "2": 1, "4": 1, "5": 2, "7": 2, "8": 0},
        }
        with pytest.raises(InputError):
            build_generic(bad)

    def test_config_dispatch(self):
        K = field_from_config({"type": "quadratic", "d": -5})
        assert K.discriminant == -20
        K = field_from_config({"type": "multiquadratic", "ds": [-3, 13]})
        assert K.degree == 4
        with pytest.raises(InputError):
            field_from_config({"type": "quadratic", "d": -5, "extra": 1})


class TestBounds:
    def test_scan_bound_on_the_quartic(self, quartic):
        assert bach_sorenson_bound(quartic, 2) == 6992
        direct = math.ceil((4 * 2 * math.log(1521) + 2.5 * 4 * 2 + 5) ** 2)
        assert direct == 6992

    def test_scan_bound_display_variant(self, quartic):
        assert bach_sorenson_bound(quartic, 2, variant="display") == 5129
        direct = math.ceil((4 * 2 * math.log(1521) + 4 * 2 + 5) ** 2)
        assert direct == 5129

    def test_scan_bound_superlinear_in_h(self, quartic, qm5):
        for K in (quartic, qm5):
            assert bach_sorenson_bound(K, 4) > 2 * bach_sorenson_bound(K, 2)

    def test_class_number_bound_values(self, qm5, quartic):
        assert lenstra_class_bound(qm5) == 5
        assert lenstra_class_bound(build_quadratic(13)) == 8
        assert lenstra_class_bound(quartic) == 503
        direct = (2 / math.pi) * math.sqrt(20)
        assert math.floor(direct * (1 + math.log(direct))) == 5

    def test_minkowski_values(self, qm5, quartic):
        assert abs(float(minkowski_bound(qm5)) - (2 / math.pi) * 20**0.5) < 1e-9
        assert minkowski_bound(build_quadratic(13)) < 2
        assert abs(float(minkowski_bound(quartic)) - 5.92734) < 1e-4
        assert minkowski_bound(build_multiquadratic((3, 6))) == Fraction(9, 2)


class TestSplitting:
    def test_quadratic_patterns(self, qm5):
        ram = split_prime(qm5, 2)
        assert [(P.e, P.f) for P in ram] == [(2, 1)]
        assert split_prime(qm5, 5)[0].e == 2
        sp = split_prime(qm5, 3)
        assert [(P.e, P.f) for P in sp] == [(1, 1), (1, 1)]
        assert sp[0].basis != sp[1].basis
        inert = split_prime(qm5, 11)
        assert [(P.e, P.f, P.norm) for P in inert] == [(1, 2, 121)]

    def test_degree_sum_and_norms(self, qm5, quartic):
        for K in (qm5, quartic):
            for p in primes_upto(60):
                primes = split_prime(K, p)
                assert sum(P.e * P.f for P in primes) == K.degree
                for P in primes:
                    assert P.norm == p**P.f
                    assert ideal_norm(P.basis) == P.norm
                    assert P.contains([p if i == 0 else 0 for i in range(K.degree)])

    def test_quartic_index_prime(self, quartic):
        primes = split_prime(quartic, 2)
        assert [(P.e, P.f) for P in primes] == [(1, 2), (1, 2)]

    def test_quartic_examples(self, quartic):
        assert [(P.e, P.f) for P in split_prime(quartic, 3)] == [(2, 1), (2, 1)]
        assert [(P.e, P.f) for P in split_prime(quartic, 61)] == [(1, 1)] * 4
        assert [(P.e, P.f) for P in split_prime(quartic, 5)] == [(1, 2), (1, 2)]

    def test_odd_index_prime_in_real_quartic(self):
        K = build_multiquadratic((2, 5))
        assert [(P.e, P.f) for P in split_prime(K, 3)] == [(1, 2), (1, 2)]

    def test_generic_index_prime_is_excluded(self):
        K = build_generic(DENSE_INDEX_CONFIG)
        with pytest.raises(ExcludedPrime):
            split_prime(K, 2)

    def test_prime_power_lattices_multiply_back(self, qm5):
        P = split_prime(qm5, 3)[0]
        sq = ideal_power(qm5, P.basis, 2)
        assert ideal_norm(sq) == 9


class TestFrobenius:
    def test_quadratic_resolution(self, qm5):
        assert frobenius(qm5, 3) == 0
        assert frobenius(qm5, 7) == 0
        assert frobenius(qm5, 11) == 1
        assert frobenius(qm5, 13) == 1

    def test_identity_exactly_on_split_residues(self, qm5):
        for p in primes_upto(300):
            if p in (2, 5):
                continue
            expect = 0 if p % 20 in (1, 3, 7, 9) else 1
            assert frobenius(qm5, p) == expect

    def test_quartic_resolution(self, quartic):
        assert frobenius(quartic, 61) == 0
        assert frobenius(quartic, 5) == 3
        assert frobenius(quartic, 2) == 3
        # sign pattern order puts the last generator in the low bit
        for p in (7, 11, 17, 23):
            expect = 2 * (kronecker(-3, p) != 1) + (kronecker(13, p) != 1)
            assert frobenius(quartic, p) == expect

    def test_frobenius_errors(self, qm5):
        with pytest.raises(PreconditionError):
            frobenius(qm5, 5)
        with pytest.raises(InputError):
            frobenius(qm5, 9)


class TestClassGroup:
    def test_z2_with_small_base(self, qm5, qm5_cg):
        assert qm5_cg.structure.invariant_factors == (2,)
        assert qm5_cg.certification == "certified-by-bound"
        assert [P.p for P in qm5_cg.factor_base] == [2]
        kinds = {w[0] for w in qm5_cg.witnesses}
        assert kinds <= {"prime", "element"}

    def test_trivial_when_no_primes_below_bound(self):
        CG = class_group(build_quadratic(13))
        assert CG.structure.invariant_factors == ()
        assert CG.factor_base == ()

    def test_quartic_order_two(self, quartic_cg):
        assert quartic_cg.structure.order == 2
        assert quartic_cg.certification == "certified-by-bound"

    @pytest.mark.parametrize("d", [-23, -21, -30, -47, -163, -254])
    def test_matches_form_oracle(self, d):
        K = build_quadratic(d)
        CG = class_group(K)
        D = K.discriminant
        assert CG.structure.order == bqf.form_count(D)
        assert CG.structure.invariant_factors == bqf.form_class_invariants(D)

    def test_wrong_declared_class_number_fails_loudly(self):
        bad = dict(CUBIC_CONFIG)
        bad["class_number"] = 2
        K = build_generic(bad)
        with pytest.raises(DataError):
            class_group(K)

    def test_known_class_number_certification(self):
        K = build_generic(CUBIC_CONFIG)
        assert class_group(K).certification == "certified-by-known-h"


class TestPrincipality:
    def test_split_29_has_generator(self, qm5, qm5_cg):
        P = split_prime(qm5, 29)[0]
        assert is_principal(qm5, qm5_cg, P)
        cert = principal_certificate(qm5, qm5_cg, P)
        assert cert["kind"] == "generator"
        assert abs(qm5.norm(cert["element"])) == 29

    def test_split_3_is_not_principal(self, qm5, qm5_cg):
        P = split_prime(qm5, 3)[0]
        assert not is_principal(qm5, qm5_cg, P)
        assert ideal_class(qm5, qm5_cg, P).order == 2
        with pytest.raises(PreconditionError):
            principal_certificate(qm5, qm5_cg, P)

    def test_inert_prime_is_principal(self, qm5, qm5_cg):
        P = split_prime(qm5, 11)[0]
        assert is_principal(qm5, qm5_cg, P)
        cert = principal_certificate(qm5, qm5_cg, P)
        assert cert["kind"] == "generator"
        assert abs(qm5.norm(cert["element"])) == 121

    def test_word_certificate_without_unit_bound(self):
        K = build_multiquadratic((2, 3))
        CG = class_group(K)
        assert principality_bound(K, 2) is None
        P = split_prime(K, 2)[0]
        assert is_principal(K, CG, P)
        cert = principal_certificate(K, CG, P)
        assert cert["kind"] == "word"
        assert cert["combination"]

    def test_principal_orders(self, qm5, qm5_cg):
        assert principal_order(qm5, qm5_cg, 3) == 2
        assert principal_order(qm5, qm5_cg, 7) == 2
        assert principal_order(qm5, qm5_cg, 29) == 1
        assert principal_order(qm5, qm5_cg, 11) == 1

    def test_principal_order_rejects_ramified(self, qm5, qm5_cg):
        with pytest.raises(PreconditionError):
            principal_order(qm5, qm5_cg, 5)

    def test_order_is_least_principal_power(self, qm5, qm5_cg):
        P = split_prime(qm5, 3)[0]
        n = principal_order(qm5, qm5_cg, 3)
        for j in range(1, n + 1):
            pw = ideal_power(qm5, P.basis, j)
            cls = _lattice_class(qm5, qm5_cg, pw, 3**j, f"P3^{j}")
            assert cls.is_identity() == (j == n)

    def test_unit_balancing_bounds(self, qm5, quartic):
        assert principality_bound(qm5, 29) == 58
        assert principality_bound(quartic, 7) is not None
        assert principality_bound(build_multiquadratic((2, 5)), 2) is None


class TestScan:
    def test_record_fields(self, qm5, qm5_cg):
        recs = scan_primes(qm5, 200, class_data=qm5_cg)
        assert len(recs) == len(primes_upto(200))
        by_p = {r.p: r for r in recs}
        assert by_p[2].status == "ramified"
        assert by_p[5].status == "ramified"
        assert by_p[3].principal_order == 2
        assert by_p[3].frobenius_class == 0
        assert by_p[11].principal_order == 1
        assert by_p[11].residue_degree == 2
        for r in recs:
            assert (r.status == "ramified") == (qm5.discriminant % r.p == 0)
            if r.status == "scanned":
                assert qm5_cg.structure.order % r.principal_order == 0
                assert r.is_principal_split == (r.principal_order == 1)

    @pytest.mark.parametrize("d", [-5, -23, -14])
    def test_fast_route_agrees_with_prime_by_prime(self, d):
        K = build_quadratic(d)
        CG = class_group(K)
        for r in scan_primes(K, 150, class_data=CG):
            if r.status != "scanned":
                continue
            assert frobenius(K, r.p) == r.frobenius_class
            assert principal_order(K, CG, r.p) == r.principal_order

    def test_real_quadratic_scan(self):
        K = build_quadratic(10)
        CG = class_group(K)
        recs = {r.p: r for r in scan_primes(K, 100, class_data=CG)}
        assert recs[2].status == "ramified"
        assert recs[3].principal_order == 2
        assert recs[31].principal_order == 1
        assert recs[7].residue_degree == 2

    def test_worker_count_never_changes_output(self, qm5, qm5_cg, quartic, quartic_cg):
        base = scan_primes(qm5, 3000, class_data=qm5_cg)
        for t in (2, 3, 7):
            assert scan_primes(qm5, 3000, class_data=qm5_cg, threads=t) == base
        qbase = scan_primes(quartic, 600, class_data=quartic_cg)
        assert scan_primes(quartic, 600, class_data=quartic_cg, threads=2) == qbase

    def test_density_values(self, qm5, qm5_cg):
        rep = empirical_density(qm5, 0, 1, 10**4, class_data=qm5_cg)
        assert rep.denominator == len(primes_upto(10**4))
        assert abs(rep.value - Fraction(1, 4)) < Fraction(1, 50)
        assert rep.ramified == (2, 5)
        assert rep.excluded == ()
        rep = empirical_density(qm5, 1, 1, 10**4, class_data=qm5_cg)
        assert abs(rep.value - Fraction(1, 2)) < Fraction(1, 50)
        rep = empirical_density(qm5, 0, 2, 10**4, class_data=qm5_cg)
        assert abs(rep.value - Fraction(1, 2)) < Fraction(1, 50)

    def test_density_counts_are_exhaustive_at_full_m(self, qm5, qm5_cg):
        # at m = exponent of the class group every scanned prime matches
        # exactly one class, so numerators add up to the scanned count
        N = 5000
        total = 0
        for C in range(qm5.galois_group.order):
            total += empirical_density(qm5, C, 2, N, class_data=qm5_cg).numerator
        records = scan_primes(qm5, N, class_data=qm5_cg)
        assert total == sum(1 for r in records if r.status == "scanned")

    def test_quartic_one_class_has_no_principal_split_primes(
        self, quartic, quartic_cg
    ):
        recs = scan_primes(quartic, 2000, class_data=quartic_cg)
        split_hits = {C: 0 for C in range(4)}
        seen = {C: 0 for C in range(4)}
        for r in recs:
            if r.status == "scanned":
                seen[r.frobenius_class] += 1
                if r.principal_order == 1:
                    split_hits[r.frobenius_class] += 1
        assert all(seen[C] > 0 for C in range(4))
        assert split_hits[3] == 0
        assert all(split_hits[C] > 0 for C in (0, 1, 2))

    def test_excluded_primes_stay_in_the_denominator(self):
        K = build_generic(DENSE_INDEX_CONFIG)
        CG = class_group(K)
        rep = empirical_density(K, 0, 1, 200, class_data=CG)
        assert rep.excluded == (2,)
        assert rep.ramified == (3,)
        assert rep.denominator == len(primes_upto(200))

    def test_scan_argument_validation(self, qm5, qm5_cg):
        with pytest.raises(InputError):
            empirical_density(qm5, 0, 0, 100, class_data=qm5_cg)
        with pytest.raises(InputError):
            empirical_density(qm5, 5, 1, 100, class_data=qm5_cg)
        with pytest.raises(InputError):
            scan_primes(qm5, 1, class_data=qm5_cg)
        with pytest.raises(InputError):
            scan_primes(qm5, 100, class_data=qm5_cg, threads=0)
