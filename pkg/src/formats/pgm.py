"""
Binary portable grey map (P5) reader.

Header: magic ``P5``, width, height and maxval separated by whitespace, with
``#`` comments running to end of line, then one whitespace byte and the
raster. Samples are one byte for maxval < 256, otherwise two bytes
big-endian. Row 0 of the returned array is the first (top) raster row.
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from src.centroidal.density import DensityGrid
from src.voronoi.diagram import BoundingBox
from src.utils.error_handler import PgmFormatError, log_errors


logger = logging.getLogger(__name__)


WHITESPACE = b" \t\r\n\x0b\x0c"


def _read_header(data: bytes) -> Tuple[List[int], int]:
    """Width, height and maxval, plus the offset of the raster."""
    if data[:2] != b"P5":
        raise PgmFormatError(f"Not a binary grey map: magic {data[:2]!r}, expected b'P5'")

    fields: List[int] = []
    pos = 2
    while len(fields) < 3:
        if pos >= len(data):
            raise PgmFormatError("Grey map header ends early")
        byte = data[pos:pos + 1]
        if byte in WHITESPACE:
            pos += 1
        elif byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            start = pos
            while pos < len(data) and data[pos:pos + 1] not in WHITESPACE and data[pos:pos + 1] != b"#":
                pos += 1
            token = data[start:pos]
            if not token.isdigit():
                raise PgmFormatError(f"Grey map header field {token!r} is not a number")
            fields.append(int(token))

    if pos >= len(data) or data[pos:pos + 1] not in WHITESPACE:
        raise PgmFormatError("Grey map header must end with a single whitespace byte")
    return fields, pos + 1


def read_pgm(data: bytes) -> np.ndarray:
    """
    Decode a P5 grey map into a ``(height, width)`` array.

    Returns:
        uint8 array when maxval < 256, big-endian-decoded uint16 otherwise

    Raises:
        PgmFormatError: Bad magic, header, maxval or raster size
    """
    (width, height, maxval), offset = _read_header(data)
    if width < 1 or height < 1:
        raise PgmFormatError(f"Grey map size must be positive, got {width}x{height}")
    if not 0 < maxval < 65536:
        raise PgmFormatError(f"Grey map maxval must be in 1..65535, got {maxval}")

    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")
    expected = width * height * dtype.itemsize
    raster = data[offset:offset + expected]
    if len(raster) < expected:
        raise PgmFormatError(f"Grey map raster has {len(raster)} bytes, expected {expected}")

    image = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    if np.any(image > maxval):
        raise PgmFormatError(f"Grey map sample exceeds maxval {maxval}")

    logger.debug(f"Read {width}x{height} grey map, maxval {maxval}")
    return image.astype(np.uint8 if maxval < 256 else np.uint16)


def write_pgm(image: np.ndarray, maxval: int = 255) -> bytes:
    """Encode a 2-D integer array as P5; the inverse of ``read_pgm``."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise PgmFormatError(f"Grey map image must be 2-D, got shape {image.shape}")
    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n{maxval}\n".encode("ascii")
    return header + image.astype(dtype).tobytes()


@log_errors
def load_density(path: Union[str, Path], bbox: BoundingBox) -> DensityGrid:
    """Density grid from a grey-map file, stretched over ``bbox``."""
    return DensityGrid(read_pgm(Path(path).read_bytes()).astype(float), bbox)


@log_errors
def load_labels(path: Union[str, Path]) -> np.ndarray:
    """Label grid from a grey-map file; each grey level is a segment label."""
    return read_pgm(Path(path).read_bytes()).astype(np.int64)
