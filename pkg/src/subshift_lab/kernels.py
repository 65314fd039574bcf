"""Backend selection for the counting kernels.

The compiled extension is preferred; the numpy fallback is used when it is
not built or when ``SUBSHIFT_LAB_PURE`` is set to a non-empty value other
than ``0``.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SUBSHIFT_LAB_PURE", "0") in ("", "0"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

occurrences = _impl.occurrences
dense_labels = _impl.dense_labels
count_distinct = _impl.count_distinct
shift_agrees = _impl.shift_agrees
label_counts = _impl.label_counts


def get_backend(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
