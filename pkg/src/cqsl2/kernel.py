"""Select the arithmetic kernel: compiled extension when built, else pure Python.

Set ``CQSL2_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by the kernel-parity tests).
"""

import os

if os.environ.get("CQSL2_PURE_PYTHON", "") not in ("", "0"):
    from cqsl2._kernel_py import IMPLEMENTATION, FieldData, Scalar, row_sub_scaled
else:
    try:
        from cqsl2._kernel import IMPLEMENTATION, FieldData, Scalar, row_sub_scaled
    except ImportError:
        from cqsl2._kernel_py import IMPLEMENTATION, FieldData, Scalar, row_sub_scaled

__all__ = ["IMPLEMENTATION", "FieldData", "Scalar", "row_sub_scaled"]
