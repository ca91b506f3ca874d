import numpy as np
import pytest

from salientvd.frame_io import Frame, encode_ppm


@pytest.fixture
def np_rng():
    return np.random.default_rng(12345)


@pytest.fixture
def salient_files(tmp_path):
    """Factory writing n tiny mosaics to disk, returning their paths."""

    def make(n, width=12, height=12):
        rng = np.random.default_rng(7)
        paths = []
        for i in range(n):
            p = tmp_path / f"salient_{i:04d}.ppm"
            p.write_bytes(encode_ppm(random_frame(rng, width, height, index=i)))
            paths.append(p)
        return paths

    return make


def random_frame(rng: np.random.Generator, width: int, height: int, index: int = 0) -> Frame:
    pixels = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    return Frame(width=width, height=height, pixels=pixels, index=index)


def random_frames(rng: np.random.Generator, n: int, width: int, height: int) -> list[Frame]:
    return [random_frame(rng, width, height, index=i) for i in range(n)]
