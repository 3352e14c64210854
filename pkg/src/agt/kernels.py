"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` twin.  Setting ``AGT_PURE_PYTHON=1`` forces the
fallback.
"""

import os

if os.environ.get("AGT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as backend
else:
    try:
        from . import _ckernels as backend
    except ImportError:
        from . import _pykernels as backend

BACKEND = backend.BACKEND
normalize = backend.normalize
step = backend.step
apply = backend.apply
is_identity = backend.is_identity
same_action = backend.same_action
dual_read = backend.dual_read
