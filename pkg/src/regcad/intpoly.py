"""Integer-polynomial kernel selection.

Imports the compiled kernel when it was built, otherwise the pure-Python
fallback.  Set REGCAD_PURE_PYTHON=1 to force the fallback (used by the
benchmark and by tests that exercise both backends).
"""

import os

if os.environ.get("REGCAD_PURE_PYTHON"):
    from regcad import _intpoly_py as _impl

    BACKEND = "python"
else:
    try:
        from regcad import _intpoly_c as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from regcad import _intpoly_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

shift1 = _impl.shift1
half_lower = _impl.half_lower
sign_variations = _impl.sign_variations
descartes_0_1 = _impl.descartes_0_1
eval_int = _impl.eval_int
eval_qq = _impl.eval_qq
