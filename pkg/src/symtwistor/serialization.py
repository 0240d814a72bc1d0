"""JSON encoding of matrices and tensors.

Real arrays become row-major nested lists; complex arrays become nested lists
whose leaves are [re, im] pairs.
"""
from __future__ import annotations

import numpy as np


def encode_array(a):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return np.stack([a.real, a.imag], axis=-1).tolist()
    return a.tolist()


def decode_array(data, complex_=None):
    """Inverse of encode_array.

    With ``complex_=None`` a trailing axis of length 2 is not enough to tell
    [re, im] pairs from a real matrix with two columns, so the caller says.
    """
    arr = np.asarray(data, dtype=float)
    if complex_:
        if arr.shape[-1] != 2:
            raise ValueError("complex arrays need [re, im] leaves")
        return arr[..., 0] + 1j * arr[..., 1]
    return arr


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_array(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj
