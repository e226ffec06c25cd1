"""Small photographic corpora built from sample images bundled with common packages.

Nothing is downloaded. Images come from scikit-image, scikit-learn and
matplotlib's data directories, which ship with those wheels.
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .codec import ImagePlanes

# name -> (package, file)
SOURCES: Dict[str, Tuple[str, str]] = {
    "astronaut": ("skimage", "astronaut.png"),
    "chelsea": ("skimage", "chelsea.png"),
    "coffee": ("skimage", "coffee.png"),
    "rocket": ("skimage", "rocket.jpg"),
    "motorcycle_left": ("skimage", "motorcycle_left.png"),
    "motorcycle_right": ("skimage", "motorcycle_right.png"),
    "camera": ("skimage", "camera.png"),
    "coins": ("skimage", "coins.png"),
    "moon": ("skimage", "moon.png"),
    "brick": ("skimage", "brick.png"),
    "grass": ("skimage", "grass.png"),
    "gravel": ("skimage", "gravel.png"),
    "hubble": ("skimage", "hubble_deep_field.jpg"),
    "retina": ("skimage", "retina.jpg"),
    "ihc": ("skimage", "ihc.png"),
    "china": ("sklearn", "china.jpg"),
    "flower": ("sklearn", "flower.jpg"),
    "grace_hopper": ("matplotlib", "grace_hopper.jpg"),
}

# Default disjoint split. The motorcycle frames are a stereo pair, so both sit
# on the training side.
TRAIN = ["astronaut", "rocket", "motorcycle_left", "motorcycle_right", "china",
         "grace_hopper", "camera", "coins", "moon", "ihc"]
TEST = ["coffee", "flower", "chelsea", "hubble", "retina"]
TEXTURES = ["brick", "grass", "gravel"]
# Four block-grid offsets give ~1.7e5 training blocks from the ten photos.
GRID_OFFSETS = [(0, 0), (4, 4), (0, 4), (4, 0)]


def _data_dir(package: str) -> Path:
    if package == "skimage":
        import skimage
        return Path(skimage.__file__).parent / "data"
    if package == "sklearn":
        import sklearn
        return Path(sklearn.__file__).parent / "datasets" / "images"
    if package == "matplotlib":
        import matplotlib
        return Path(matplotlib.get_data_path()) / "sample_data"
    raise KeyError(package)


def load_sample(name: str) -> ImagePlanes:
    """Load a bundled sample as 8-bit RGB (grayscale replicated to 3 channels)."""
    from PIL import Image

    package, fname = SOURCES[name]
    with Image.open(_data_dir(package) / fname) as im:
        return ImagePlanes.from_hwc(np.asarray(im.convert("RGB"), dtype=np.float64))


def available() -> List[str]:
    names = []
    for name, (package, fname) in SOURCES.items():
        try:
            if (_data_dir(package) / fname).exists():
                names.append(name)
        except ImportError:
            pass
    return names


def shifted_crops(img: ImagePlanes, offsets: Sequence[Tuple[int, int]]) -> List[ImagePlanes]:
    """Crops starting at each (dy, dx) offset; each lands a different 8x8 block grid."""
    return [ImagePlanes(img.planes[:, dy:, dx:], img.space) for dy, dx in offsets]


def export(names: Sequence[str], out_dir, offsets: Sequence[Tuple[int, int]] = ((0, 0),)) -> List[Path]:
    """Write samples (and optional grid-shifted crops) as PPM files."""
    from .formats import write_image

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in names:
        for (dy, dx), crop in zip(offsets, shifted_crops(load_sample(name), offsets)):
            suffix = "" if (dy, dx) == (0, 0) else f"_s{dy}{dx}"
            path = out_dir / f"{name}{suffix}.ppm"
            write_image(crop, path)
            paths.append(path)
    return paths
