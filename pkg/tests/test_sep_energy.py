import numpy as np
import pytest

from enwit import (
    HermitianOperator,
    Partition,
    ProductStateAnsatz,
    SystemShape,
    XXXParams,
    ansatz_energy,
    build_xxx,
    eig,
    esep_closed_form_xxx,
    esep_grid,
    esep_reference,
    esep_seesaw,
)
from enwit.hamiltonians import PAULI
from enwit.sep_energy import (
    _effective_block_operator,
    closed_form_ansatz_xxx,
    full_vector,
    random_ansatz,
)

Q2 = SystemShape([2, 2])
SINGLETONS = Partition.singletons(2)


class TestPartition:
    def test_needs_two_blocks(self):
        with pytest.raises(ValueError):
            Partition([[0, 1]])

    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            Partition([[0, 1], [1]])

    def test_coverage_check(self):
        with pytest.raises(ValueError):
            Partition([[0], [2]]).validate_for(Q2)

    def test_block_dims(self):
        part = Partition([[0, 2], [1]])
        assert part.block_dims(SystemShape([2, 3, 2])) == [4, 3]


class TestProductStateAnsatz:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            ProductStateAnsatz(SINGLETONS, [np.array([1.0, 1.0]), np.array([1.0, 0.0])])

    def test_full_vector_interleaved_blocks(self):
        part = Partition([[0, 2], [1]])
        shape = SystemShape([2, 2, 2])
        pair = np.zeros(4, dtype=complex)
        pair[3] = 1.0  # |1>_0 |1>_2
        mid = np.array([1.0, 0.0], dtype=complex)  # |0>_1
        v = full_vector(shape, ProductStateAnsatz(part, [pair, mid]))
        expected = np.zeros(8)
        expected[0b101] = 1.0
        assert np.abs(v - expected).max() < 1e-12


class TestSeesaw:
    def test_field_free_minimum(self, h_xxx):
        rep = esep_seesaw(h_xxx(), SINGLETONS, restarts=16, seed=0)
        assert rep.esep == pytest.approx(-1.0, abs=1e-8)
        assert rep.source == "exact-optimized"
        assert rep.converged
        assert ansatz_energy(h_xxx(), rep.minimizer) == pytest.approx(rep.esep, abs=1e-8)

    def test_matches_closed_form_at_unit_field(self, h_xxx):
        rep = esep_seesaw(h_xxx(1.0, 1.0), SINGLETONS, restarts=32, seed=1)
        assert rep.esep == pytest.approx(-1.5, abs=1e-7)

    def test_zz_product_minimum(self):
        h = HermitianOperator(Q2, np.kron(PAULI["Z"], PAULI["Z"]))
        rep = esep_seesaw(h, SINGLETONS, restarts=8, seed=2)
        assert rep.esep == pytest.approx(-1.0, abs=1e-10)

    def test_never_below_ground_energy(self, h_xxx):
        for b in (0.0, 0.9, 2.5):
            h = h_xxx(1.0, b)
            rep = esep_seesaw(h, SINGLETONS, restarts=8, seed=3)
            assert rep.esep >= eig(h).e_min - 1e-9

    def test_requires_restart(self, h_xxx):
        with pytest.raises(ValueError):
            esep_seesaw(h_xxx(), SINGLETONS, restarts=0)

    def test_deterministic_given_seed(self, h_xxx):
        a = esep_seesaw(h_xxx(1.0, 0.4), SINGLETONS, restarts=6, seed=9)
        b = esep_seesaw(h_xxx(1.0, 0.4), SINGLETONS, restarts=6, seed=9)
        assert a.esep == b.esep
        for u, v in zip(a.minimizer.block_states, b.minimizer.block_states):
            assert np.array_equal(u, v)

    def test_batched_matches_single_restart_operator(self, h_xxx):
        h = h_xxx(1.0, 0.7)
        rng = np.random.default_rng(4)
        states = list(random_ansatz(Q2, SINGLETONS, rng).block_states)
        h_t = h.entries.reshape((2, 2, 2, 2))
        m = _effective_block_operator(h_t, Q2, SINGLETONS, states, 1)
        v = states[0]
        expected = np.einsum("a,abAB,A->bB", v.conj(), h_t, v)
        assert np.abs(m - (expected + expected.conj().T) / 2).max() < 1e-12

    def test_product_states_never_beat_seesaw(self, h_xxx):
        h = h_xxx(1.0, 0.5)
        rep = esep_seesaw(h, SINGLETONS, restarts=32, seed=5)
        rng = np.random.default_rng(6)
        for _ in range(1000):
            sigma = random_ansatz(Q2, SINGLETONS, rng)
            assert ansatz_energy(h, sigma) >= rep.esep - 1e-9


class TestGrid:
    def test_field_free_value(self, h_xxx):
        assert esep_grid(h_xxx(), SINGLETONS, 64) == pytest.approx(-1.0, abs=2e-3)

    def test_constant_operator(self):
        h = HermitianOperator(Q2, np.eye(4))
        assert esep_grid(h, SINGLETONS, 16) == pytest.approx(1.0, abs=1e-12)

    def test_nested_grid_monotonicity(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            h = HermitianOperator(Q2, (g + g.conj().T) / 2)
            coarse = esep_grid(h, SINGLETONS, 16)
            fine = esep_grid(h, SINGLETONS, 128)
            assert fine <= coarse + 1e-12

    def test_rejects_small_resolution(self, h_xxx):
        with pytest.raises(ValueError):
            esep_grid(h_xxx(), SINGLETONS, 4)

    def test_rejects_large_blocks(self):
        shape = SystemShape([2, 2, 2, 2])
        h = HermitianOperator(shape, np.eye(16))
        with pytest.raises(ValueError):
            esep_grid(h, Partition([[0, 1, 2], [3]]), 8)

    def test_three_blocks(self):
        shape = SystemShape([2, 2, 2])
        zzz = np.kron(np.kron(PAULI["Z"], PAULI["Z"]), PAULI["Z"])
        h = HermitianOperator(shape, zzz)
        val = esep_grid(h, Partition.singletons(3), 8)
        assert val == pytest.approx(-1.0, abs=1e-9)

    def test_seesaw_at_least_as_good_as_grid(self, h_xxx):
        for b in (0.0, 0.8, 1.7):
            h = h_xxx(1.0, b)
            see = esep_seesaw(h, SINGLETONS, restarts=32, seed=8).esep
            grid = esep_grid(h, SINGLETONS, 32)
            assert see <= grid + 1e-9


class TestClosedForm:
    @pytest.mark.parametrize(
        "b,expected",
        [(0.0, -1.0), (1.0, -1.5), (2.0, -3.0), (3.0, -5.0), (-3.0, -5.0)],
    )
    def test_values(self, b, expected):
        assert esep_closed_form_xxx(XXXParams(1.0, b)) == pytest.approx(expected, abs=1e-12)

    def test_branch_continuity(self):
        inner = -1.0 - 2.0**2 / 2.0
        outer = 1.0 - 2.0 * 2.0
        assert inner == outer == esep_closed_form_xxx(XXXParams(1.0, 2.0))

    def test_rejects_chains(self):
        with pytest.raises(ValueError):
            esep_closed_form_xxx(XXXParams(1.0, 0.0, n_sites=3))

    def test_ansatz_attains_value(self):
        for b in (0.0, 0.5, 1.9, 2.5, -2.5):
            p = XXXParams(1.0, b)
            h = build_xxx(p)
            energy = ansatz_energy(h, closed_form_ansatz_xxx(p))
            assert energy == pytest.approx(esep_closed_form_xxx(p), abs=1e-12)


class TestReference:
    def test_passthrough(self):
        rep = esep_reference(-2.0)
        assert rep.esep == -2.0
        assert rep.source == "user-supplied"
        assert rep.minimizer is None

    def test_vacuous_value_detects_nothing(self, h_xxx):
        from enwit import make_witness, robustness_lower_bound

        w = make_witness(h_xxx(), esep_reference(-1e6))
        report = robustness_lower_bound(w, -3.0)
        assert report.bound <= 0.0
        assert not report.detected


class TestPartitionRefinement:
    def test_refining_never_decreases_minimum(self):
        rng = np.random.default_rng(11)
        shape = SystemShape([2, 2, 2])
        coarse = Partition([[0, 1], [2]])
        fine = Partition.singletons(3)
        for _ in range(5):
            g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            h = HermitianOperator(shape, (g + g.conj().T) / 2)
            e_coarse = esep_seesaw(h, coarse, restarts=24, seed=12).esep
            e_fine = esep_seesaw(h, fine, restarts=24, seed=12).esep
            assert e_fine >= e_coarse - 1e-9
