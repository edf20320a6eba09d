"""Fixtures and reporting hooks; helpers live in synth.py / oracles.py."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import synth
from synth import uv_sphere_mesh, box_mesh, write_off
from sngraph.mesh import TriangleMesh


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not synth.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in synth.ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def sphere_off(tmp_path_factory):
    path = tmp_path_factory.mktemp("meshes") / "sphere.off"
    write_off(uv_sphere_mesh(), path)
    return path


@pytest.fixture(scope="session")
def dumbbell_off(tmp_path_factory):
    """Two boxes joined by a thin bar, elongated along x."""
    path = tmp_path_factory.mktemp("meshes") / "dumbbell.off"
    left = box_mesh((-0.5, -0.16, -0.16), (-0.2, 0.16, 0.16))
    right = box_mesh((0.2, -0.16, -0.16), (0.5, 0.16, 0.16))
    bar = box_mesh((-0.25, -0.04, -0.04), (0.25, 0.04, 0.04))
    verts = np.concatenate([left.vertices, right.vertices, bar.vertices])
    tris = np.concatenate(
        [left.triangles, right.triangles + 8, bar.triangles + 16]
    )
    write_off(TriangleMesh(verts, tris), path)
    return path
