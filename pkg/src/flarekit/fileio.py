"""PNG and PFM image file I/O.

PNG carries 8- or 16-bit encoded images. PFM (portable float map, binary
"PF" variant) carries linear images losslessly at float32 precision for
intermediate storage. PNG encoder settings are pinned so identical pixel
data always produces identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .color import EncodedImage, LinearImage

# fixed zlib level -> byte-stable PNG output
_PNG_PARAMS = [cv2.IMWRITE_PNG_COMPRESSION, 3]


class ImageReadError(ValueError):
    """Raised when a file cannot be decoded as a supported image."""


def read_png(path: str | Path) -> EncodedImage:
    """Read an 8- or 16-bit PNG as an encoded RGB image.

    Grayscale input is expanded to three channels, alpha is dropped.
    """
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageReadError(f"cannot decode image file: {path}")
    if raw.dtype == np.uint8:
        depth = 8
    elif raw.dtype == np.uint16:
        depth = 16
    else:
        raise ImageReadError(f"unsupported sample type {raw.dtype} in {path}")
    if raw.ndim == 2:
        rgb = np.stack([raw] * 3, axis=2)
    elif raw.ndim == 3 and raw.shape[2] in (3, 4):
        rgb = cv2.cvtColor(raw, cv2.COLOR_BGRA2RGB if raw.shape[2] == 4 else cv2.COLOR_BGR2RGB)
    else:
        raise ImageReadError(f"unsupported channel layout {raw.shape} in {path}")
    return EncodedImage(np.ascontiguousarray(rgb), depth=depth)


def write_png(path: str | Path, img: EncodedImage) -> None:
    bgr = cv2.cvtColor(img.data, cv2.COLOR_RGB2BGR)
    if not cv2.imwrite(str(path), bgr, _PNG_PARAMS):
        raise OSError(f"failed to write PNG: {path}")


def read_pfm(path: str | Path) -> LinearImage:
    """Read a binary color PFM file as a linear image."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"PF":
            raise ImageReadError(f"not a color PFM file: {path}")
        dims = fh.readline().split()
        if len(dims) != 2:
            raise ImageReadError(f"malformed PFM dimensions in {path}")
        width, height = int(dims[0]), int(dims[1])
        scale = float(fh.readline().strip())
        endian = "<" if scale < 0 else ">"
        count = width * height * 3
        payload = fh.read(count * 4)
        if len(payload) != count * 4:
            raise ImageReadError(f"truncated PFM payload in {path}")
    samples = np.frombuffer(payload, dtype=endian + "f4").reshape(height, width, 3)
    # PFM stores rows bottom-up
    data = np.ascontiguousarray(samples[::-1].astype(np.float64))
    return LinearImage(np.clip(data, 0.0, 1.0))


def write_pfm(path: str | Path, img: LinearImage) -> None:
    """Write a linear image as little-endian binary color PFM."""
    with open(path, "wb") as fh:
        fh.write(b"PF\n")
        fh.write(f"{img.width} {img.height}\n".encode("ascii"))
        fh.write(b"-1.0\n")
        fh.write(img.data[::-1].astype("<f4").tobytes())
