import subprocess
import sys

import numpy as np
import pytest

from opk import _core, _pysearch

csearch = pytest.importorskip("opk._csearch")


def random_masks(rng, n_items, width, density):
    out = []
    for _ in range(n_items):
        m = 0
        for b in range(width):
            if rng.random() < density:
                m |= 1 << b
        out.append(m or 1)
    return out


@pytest.mark.parametrize("seed", range(80))
def test_overlap_backends_agree(seed):
    rng = np.random.default_rng(seed)
    masks = random_masks(rng, int(rng.integers(0, 18)), 20, 0.25)
    k, t = int(rng.integers(0, 5)), int(rng.integers(0, 3))
    assert csearch.search_overlap(masks, k, t) == _pysearch.search_overlap(masks, k, t)


@pytest.mark.parametrize("seed", range(80))
def test_membership_backends_agree(seed):
    rng = np.random.default_rng(1000 + seed)
    masks = random_masks(rng, int(rng.integers(0, 16)), 16, 0.3)
    k, t = int(rng.integers(0, 5)), int(rng.integers(1, 4))
    groups = [int(g) for g in rng.integers(0, 6, len(masks))] if seed % 2 else None
    assert (csearch.search_membership(masks, k, t, groups)
            == _pysearch.search_membership(masks, k, t, groups))


def test_wide_masks_use_python():
    masks = [1 << 70, 1 << 71, (1 << 70) | 1]
    assert _core.search_overlap(masks, 2, 0) == _pysearch.search_overlap(masks, 2, 0)


def test_pure_mode_env():
    code = "import opk._core as c; print(c.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"OPK_PURE": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "python"
