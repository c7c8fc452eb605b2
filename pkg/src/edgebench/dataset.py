"""Loading BIPED-style image / ground-truth pairs.

A manifest is a UTF-8 text file with one tab-separated line per sample::

    RGB_001<TAB>imgs/test/rgbr/RGB_001.jpg<TAB>edge_maps/test/rgbr/RGB_001.png

Relative paths are resolved against the dataset root, which defaults to the
manifest's directory (or ``$EDGEBENCH_DATA`` when set).
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .image import to_grayscale

DATA_ENV = "EDGEBENCH_DATA"
DEFAULT_GT_CUTOFF = 127


class DatasetError(Exception):
    pass


class ImageFormatError(DatasetError):
    pass


class SampleError(DatasetError):
    def __init__(self, sample_id: str, message: str):
        super().__init__(f"{sample_id}: {message}")
        self.sample_id = sample_id


def _decode(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im, dtype=np.float64)
                return arr * (255.0 / 65535.0)
            if im.mode not in ("L", "RGB"):
                im = im.convert("RGB") if im.mode not in ("1", "LA") else im.convert("L")
            return np.asarray(im, dtype=np.float64)
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageFormatError(f"cannot decode {path}: {exc}") from exc


def load_image(path) -> np.ndarray:
    """Decode PNG/JPEG/PGM to a float gray image on the 0-255 scale."""
    arr = _decode(path)
    if arr.ndim == 3:
        arr = to_grayscale(arr[..., 0], arr[..., 1], arr[..., 2])
    return arr


def load_ground_truth(path, cutoff: float = DEFAULT_GT_CUTOFF) -> np.ndarray:
    return load_image(path) > cutoff


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    image: Path
    gt: Path


@dataclass
class Manifest:
    root: Path
    entries: list[ManifestEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


def default_root() -> Path | None:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else None


def read_manifest(path, root=None, check_files: bool = True) -> Manifest:
    path = Path(path)
    if root is None:
        root = default_root() or path.parent
    root = Path(root)
    entries = []
    seen = set()
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DatasetError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
            sid, img, gt = parts
            if sid in seen:
                raise DatasetError(f"{path}:{lineno}: duplicate id {sid!r}")
            seen.add(sid)
            entry = ManifestEntry(sid, root / img, root / gt)
            if check_files:
                for p in (entry.image, entry.gt):
                    if not p.is_file():
                        raise FileNotFoundError(f"{path}:{lineno}: {sid}: missing {p}")
            entries.append(entry)
    return Manifest(root, entries)


def write_manifest(manifest: Manifest, path) -> None:
    lines = []
    for e in manifest.entries:
        img, gt = (os.path.relpath(p, manifest.root) for p in (e.image, e.gt))
        lines.append(f"{e.id}\t{img}\t{gt}\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)


def biped_manifest(root, ids=("RGB_001", "RGB_002", "RGB_003"), split: str = "test") -> Manifest:
    """Manifest for an unpacked BIPED tree (``edges/imgs/<split>/rgbr`` layout)."""
    root = Path(root)
    base = root / "edges" if (root / "edges").is_dir() else root
    entries = []
    for sid in ids:
        imgs = sorted((base / "imgs" / split / "rgbr").glob(f"{sid}.*"))
        gts = sorted((base / "edge_maps" / split / "rgbr").glob(f"{sid}.*"))
        if not imgs or not gts:
            raise FileNotFoundError(f"{sid}: not found under {base}")
        entries.append(ManifestEntry(sid, imgs[0], gts[0]))
    return Manifest(root, entries)


@dataclass
class SamplePair:
    id: str
    image: np.ndarray
    gt: np.ndarray
    image_path: Path
    gt_path: Path


def load_pair(entry: ManifestEntry, gt_cutoff: float = DEFAULT_GT_CUTOFF) -> SamplePair:
    img = load_image(entry.image)
    gt = load_ground_truth(entry.gt, gt_cutoff)
    if img.shape != gt.shape:
        raise SampleError(entry.id, f"image is {img.shape} but ground truth is {gt.shape}")
    return SamplePair(entry.id, img, gt, entry.image, entry.gt)


def pair_samples(manifest: Manifest, gt_cutoff: float = DEFAULT_GT_CUTOFF) -> list[SamplePair]:
    """Load every entry, failing on the first dimension mismatch."""
    return [load_pair(e, gt_cutoff) for e in manifest.entries]


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_checksums(manifest: Manifest, path) -> None:
    """Write a ``sha256sum``-compatible file covering every manifest file."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in manifest.entries:
            for p in (e.image, e.gt):
                fh.write(f"{sha256(p)}  {os.path.relpath(p, manifest.root)}\n")


def verify_checksums(path, root) -> list[str]:
    """Return the relative paths whose digest does not match (missing files included)."""
    root = Path(root)
    bad = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            digest, rel = line.rstrip("\n").split("  ", 1)
            p = root / rel
            if not p.is_file() or sha256(p) != digest:
                bad.append(rel)
    return bad
