import itertools

import numpy as np
import pytest

from spcluster import hopfield
from spcluster.hopfield import (
    NonzeroDiagonal,
    NotSymmetric,
    TooLarge,
    all_states,
    basin_map,
    binary_from_bipolar,
    bipolar_from_binary,
    converge,
    converge_many,
    energy,
    enumerate_fixed_points,
    hebbian_learn,
    local_field,
    sweep,
)
from spcluster.reference import (
    REFERENCE_FIXED_POINTS,
    REFERENCE_PATTERNS,
    REFERENCE_WEIGHTS,
)

REF_W = np.array(REFERENCE_WEIGHTS, dtype=np.int64)


# independent oracles, kept deliberately naive


def naive_hebbian(patterns):
    m, n = len(patterns), len(patterns[0])
    w = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            w[i][j] = sum((2 * p[i] - 1) * (2 * p[j] - 1) for p in patterns)
    return w

def naive_field(state, w, i):
    return sum(w[i][k] * state[k] for k in range(len(state)))

def brute_force_trajectory(state, w, max_updates=10_000):
    """Literal one-component-at-a-time updates until N in a row change nothing."""
    x = list(state)
    n = len(x)
    quiet = 0
    for t in range(max_updates):
        j = t % n
        new = 1 if naive_field(x, w, j) >= 0 else -1
        quiet = quiet + 1 if new == x[j] else 0
        x[j] = new
        if quiet == n:
            return tuple(x)
    raise AssertionError("brute-force trajectory did not settle")


class TestBipolar:
    def test_examples(self):
        assert bipolar_from_binary([0, 0, 0]).tolist() == [-1, -1, -1]
        assert bipolar_from_binary([1, 0, 1]).tolist() == [1, -1, 1]

    def test_round_trip_exhaustive(self):
        for n in range(1, 9):
            for bits in itertools.product((0, 1), repeat=n):
                assert tuple(binary_from_bipolar(bipolar_from_binary(bits))) == bits

    def test_rejects_bad_values(self):
        with pytest.raises(hopfield.NetworkError):
            bipolar_from_binary([0, 2])
        with pytest.raises(hopfield.NetworkError):
            binary_from_bipolar([1, 0])


class TestHebbianLearn:
    def test_reference_matrix_exact(self):
        w = hebbian_learn(np.array(REFERENCE_PATTERNS))
        assert np.array_equal(w, REF_W)

    def test_single_all_ones_pattern(self):
        w = hebbian_learn([[1, 1, 1]])
        assert np.array_equal(w, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(7)
        patterns = rng.integers(0, 2, size=(2, 6))
        assert hebbian_learn(patterns).tolist() == naive_hebbian(patterns.tolist())

    def test_structure_invariants(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            m = int(rng.integers(1, 7))
            n = int(rng.integers(2, 9))
            w = hebbian_learn(rng.integers(0, 2, size=(m, n)))
            assert np.array_equal(w, w.T)
            assert (np.diagonal(w) == 0).all()
            assert (np.abs(w) <= m).all()
            assert ((w[~np.eye(n, dtype=bool)] - m) % 2 == 0).all()

    def test_rejects_bad_input(self):
        with pytest.raises(hopfield.NetworkError):
            hebbian_learn([[0, 2]])
        with pytest.raises(hopfield.LengthMismatch):
            hebbian_learn(np.zeros((0, 4), dtype=int))


class TestLocalField:
    def test_zero_matrix(self):
        w = np.zeros((4, 4), dtype=int)
        state = bipolar_from_binary([1, 0, 1, 0])
        assert all(local_field(state, w, i) == 0 for i in range(4))

    def test_reference_fixed_point_field_signs(self):
        state = bipolar_from_binary(REFERENCE_FIXED_POINTS[2])
        for i in range(10):
            field = local_field(state, REF_W, i)
            assert (1 if field >= 0 else -1) == state[i]

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(3)
        w = rng.integers(-4, 5, size=(6, 6))
        state = rng.choice([-1, 1], size=6)
        for i in range(6):
            assert local_field(state, w, i) == naive_field(state.tolist(), w.tolist(), i)


class TestSweep:
    def test_fixed_point_unchanged(self):
        for point in REFERENCE_FIXED_POINTS:
            state = bipolar_from_binary(point)
            out, changed = sweep(state, REF_W)
            assert not changed
            assert np.array_equal(out, state)

    def test_hand_traced_two_units(self):
        w = np.array([[0, 1], [1, 0]])
        out, changed = sweep(np.array([-1, 1]), w)
        assert changed
        assert out.tolist() == [1, 1]

    def test_zero_matrix_forces_plus_one(self):
        out, _ = sweep(np.array([-1, -1, -1]), np.zeros((3, 3), dtype=int))
        assert out.tolist() == [1, 1, 1]

    def test_updates_see_earlier_changes(self):
        # unit 1 lands on +1 only because it sees unit 0's fresh flip; a
        # parallel update from the same start would leave it at -1
        w = np.array([[0, 1], [1, 0]])
        start = np.array([-1, 1])
        out, _ = sweep(start, w)
        assert out.tolist() == [1, 1]
        parallel = np.where(w @ start >= 0, 1, -1)
        assert parallel.tolist() == [1, -1]


class TestConverge:
    def test_reference_points_converge_in_one_sweep(self):
        for point in REFERENCE_FIXED_POINTS:
            res = converge(bipolar_from_binary(point), REF_W)
            assert res.converged
            assert res.sweeps_used == 1
            assert np.array_equal(res.fixed_point, bipolar_from_binary(point))

    def test_all_reference_states_converge(self):
        terminal, sweeps, converged = converge_many(all_states(10), REF_W)
        assert converged.all()
        assert (sweeps >= 1).all()

    def test_zero_matrix(self):
        res = converge(np.array([-1, 1, -1]), np.zeros((3, 3), dtype=int))
        assert res.converged
        assert res.fixed_point.tolist() == [1, 1, 1]
        assert res.sweeps_used == 2  # one changing sweep plus the confirming one

    def test_budget_exhaustion_is_loud(self):
        w = np.array([[0, -1], [-1, 0]])
        res = converge(np.array([1, 1]), w, max_sweeps=1)
        assert not res.converged

    def test_validates_weights(self):
        with pytest.raises(NotSymmetric):
            converge(np.array([1, 1]), np.array([[0, 1], [2, 0]]))
        with pytest.raises(NonzeroDiagonal):
            converge(np.array([1, 1]), np.array([[1, 0], [0, 1]]))
        with pytest.raises(hopfield.NetworkError):
            converge(np.array([1, 1]), np.array([[0, 1], [1, 0]]), max_sweeps=0)

    def test_reconverging_is_a_no_op(self):
        rng = np.random.default_rng(17)
        w = hebbian_learn(rng.integers(0, 2, size=(3, 8)))
        for _ in range(20):
            start = rng.choice([-1, 1], size=8)
            first = converge(start, w)
            second = converge(first.fixed_point, w)
            assert second.sweeps_used == 1
            assert np.array_equal(second.fixed_point, first.fixed_point)

    def test_converge_many_matches_converge(self):
        rng = np.random.default_rng(23)
        w = hebbian_learn(rng.integers(0, 2, size=(4, 9)))
        starts = rng.choice([-1, 1], size=(40, 9))
        terminal, sweeps, converged = converge_many(starts, w)
        assert converged.all()
        for k in range(starts.shape[0]):
            res = converge(starts[k], w)
            assert np.array_equal(res.fixed_point, terminal[k])
            assert res.sweeps_used == sweeps[k]


class TestEnergy:
    def test_zero_matrix(self):
        assert energy(np.array([1, -1, 1]), np.zeros((3, 3), dtype=int)) == 0.0

    def test_hand_evaluated(self):
        assert energy(np.array([1, 1]), np.array([[0, 1], [1, 0]])) == -1.0

    def test_non_increasing_along_trajectories(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            a = rng.integers(-3, 4, size=(n, n))
            w = a + a.T
            np.fill_diagonal(w, 0)
            x = rng.choice([-1, 1], size=n).astype(np.int64)
            for _ in range(4 * n):
                for j in range(n):
                    before = energy(x, w)
                    x[j] = 1 if w[j] @ x >= 0 else -1
                    assert energy(x, w) <= before


class TestEnumerateFixedPoints:
    def test_reference_network_has_exactly_four(self):
        points = enumerate_fixed_points(REF_W)
        found = {tuple(binary_from_bipolar(p).tolist()) for p in points}
        assert found == set(REFERENCE_FIXED_POINTS)

    def test_zero_matrix(self):
        points = enumerate_fixed_points(np.zeros((5, 5), dtype=int))
        assert len(points) == 1
        assert points[0].tolist() == [1, 1, 1, 1, 1]

    def test_single_stored_pattern_is_fixed(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            n = int(rng.integers(2, 10))
            pattern = rng.integers(0, 2, size=(1, n))
            w = hebbian_learn(pattern)
            found = {tuple(p.tolist()) for p in enumerate_fixed_points(w)}
            assert tuple(bipolar_from_binary(pattern[0]).tolist()) in found

    def test_too_large(self):
        with pytest.raises(TooLarge):
            enumerate_fixed_points(np.zeros((21, 21), dtype=int))

    def test_complement_of_nonzero_field_fixed_point_is_fixed(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            w = hebbian_learn(rng.integers(0, 2, size=(3, 7)))
            fixed = {tuple(p.tolist()) for p in enumerate_fixed_points(w)}
            for p in fixed:
                fields = np.array(p) @ w
                if (fields != 0).all():
                    assert tuple((-np.array(p)).tolist()) in fixed


class TestBasinMap:
    def test_fixed_points_map_to_themselves(self):
        mapping = basin_map(REF_W)
        for p in enumerate_fixed_points(REF_W):
            key = tuple(p.tolist())
            assert mapping[key] == key

    def test_reference_partition(self):
        mapping = basin_map(REF_W)
        assert len(mapping) == 1024
        images = set(mapping.values())
        binary_images = {tuple(binary_from_bipolar(np.array(v)).tolist()) for v in images}
        assert binary_images == set(REFERENCE_FIXED_POINTS)

    def test_matches_brute_force_trajectories(self):
        rng = np.random.default_rng(37)
        w = hebbian_learn(rng.integers(0, 2, size=(3, 8)))
        mapping = basin_map(w)
        for state in all_states(8)[:: 7]:  # spot-check a spread of states
            expected = brute_force_trajectory(state.tolist(), w.tolist())
            assert mapping[tuple(state.tolist())] == expected

    def test_too_large(self):
        with pytest.raises(TooLarge):
            basin_map(np.zeros((17, 17), dtype=int))
