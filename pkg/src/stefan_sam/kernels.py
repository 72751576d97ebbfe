"""Backend selection for the time loops.

The compiled extension is used when it imports; set STEFAN_SAM_BACKEND=python
to force the pure-Python loops.
"""

import os

from . import _pykernels

OK = _pykernels.OK
NONFINITE = _pykernels.NONFINITE
RECEDED = _pykernels.RECEDED
FRONT_EXIT = _pykernels.FRONT_EXIT
WINDOW_EXIT = _pykernels.WINDOW_EXIT

STATUS_MESSAGES = {
    NONFINITE: "non-finite value (explicit step unstable)",
    RECEDED: "tracked front moved left by more than the guard width",
    FRONT_EXIT: "front left the computational domain",
}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def available_backends():
    return ["cython", "python"] if _ckernels is not None else ["python"]


def get_backend(name=None):
    """Kernel module for name ('cython', 'python' or None for the default)."""
    if name is None:
        name = os.environ.get("STEFAN_SAM_BACKEND", "cython" if _ckernels is not None else "python")
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built; reinstall with a C compiler")
        return _ckernels
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")


def backend_name(module):
    return "cython" if module is _ckernels and module is not None else "python"


BACKEND = backend_name(get_backend())
