import numpy as np

from sngraph.sdf import compute_sdf, read_sdf_dump, squared_distance_transform, write_sdf_dump
from sngraph.voxel import VoxelGrid

from synth import ball_grid, random_occupancy
from oracles import brute_force_signed_sq


def test_single_voxel():
    res = 8
    occ = np.zeros((res, res, res), dtype=np.bool_)
    occ[3, 3, 3] = True
    s = compute_sdf(VoxelGrid(res, occ))
    assert s.values[3, 3, 3] == 1.0 / res
    for d in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)):
        assert s.values[3 + d[0], 3 + d[1], 3 + d[2]] == -1.0 / res


def test_centered_block():
    res = 16
    occ = np.zeros((res, res, res), dtype=np.bool_)
    occ[6:11, 6:11, 6:11] = True  # 5^3 block, center voxel (8, 8, 8)
    s = compute_sdf(VoxelGrid(res, occ))
    assert s.values[8, 8, 8] == 3.0 / res


def test_matches_brute_force_random():
    rng = np.random.default_rng(42)
    for _ in range(20):
        res = int(rng.integers(4, 13))
        occ = random_occupancy(rng, res, fill=float(rng.uniform(0.2, 0.8)))
        if not occ.any() or occ.all():
            continue
        sq_in = squared_distance_transform(~occ)
        sq_out = squared_distance_transform(occ)
        expected = brute_force_signed_sq(occ)
        got = np.where(occ, sq_in, sq_out)
        assert np.array_equal(got, expected)


def test_sign_pattern_matches_occupancy():
    rng = np.random.default_rng(5)
    occ = random_occupancy(rng, 10, fill=0.4)
    s = compute_sdf(VoxelGrid(10, occ))
    assert np.array_equal(s.values > 0, occ)
    assert not (s.values == 0).any()


def test_lipschitz_in_voxel_units():
    # Center-to-opposite-center values jump by 2/R across the boundary; the
    # 1-Lipschitz field is the implicit midplane distance, value -/+ 0.5/R.
    rng = np.random.default_rng(9)
    res = 12
    occ = random_occupancy(rng, res, fill=0.5)
    s = compute_sdf(VoxelGrid(res, occ))
    surf = s.values - np.sign(s.values) * 0.5 / res
    coords = rng.integers(0, res, size=(500, 2, 3))
    for a, b in coords:
        da = surf[tuple(a)]
        db = surf[tuple(b)]
        assert abs(da - db) <= np.linalg.norm(a - b) / res + 1e-12


def test_empty_grid_sentinel():
    s = compute_sdf(VoxelGrid(6, np.zeros((6, 6, 6), dtype=np.bool_)))
    assert s.is_empty
    assert (s.values == -1.0).all()


def test_full_grid_measures_to_outside():
    # Every voxel occupied: distances run to the empty space past the grid
    # edge, so the peak sits at the centre and boundary voxels are at 1/R.
    res = 6
    s = compute_sdf(VoxelGrid(res, np.ones((res, res, res), dtype=np.bool_)))
    assert (s.values > 0).all()
    assert s.values[0, 0, 0] == 1.0 / res
    assert s.values[3, 3, 3] == 3.0 / res
    for i in range(res):
        for j in range(res):
            for k in range(res):
                expect = min(i + 1, res - i, j + 1, res - j, k + 1, res - k)
                assert s.values[i, j, k] == expect / res


def test_ball_max_at_center():
    s = compute_sdf(ball_grid(16, 5.0))
    i, j, k = np.unravel_index(np.argmax(s.values), s.values.shape)
    # R even: four symmetric maxima around the fractional center; all
    # carry the same value as the analytic inradius-ish bound.
    assert s.values[i, j, k] > 0.2


def test_sdf_dump_roundtrip(tmp_path):
    s = compute_sdf(ball_grid(8, 2.5))
    p = tmp_path / "grid.snf"
    write_sdf_dump(s, p)
    loaded = read_sdf_dump(p)
    assert loaded.resolution == 8
    assert np.allclose(loaded.values, s.values, atol=1e-6)
    assert p.read_bytes()[:4] == b"SNF1"
