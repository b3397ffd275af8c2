"""Border rank 4 membership tests for 3x3x4 and 4x4x4 tensors.

The heavy lifting lives in the C++ extension ``salmon._salmon``; this package
turns its JSON reports into dicts and supplies the default LM data file.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Sequence

from . import _salmon
from ._salmon import SalmonError, Tensor

__all__ = [
    "SalmonError",
    "Tensor",
    "tensor",
    "sample_rank_r",
    "sample_dense",
    "sample_special_form",
    "sample_essentially_234",
    "matmul_tensor",
    "lm_file",
    "check_334",
    "check_444",
    "float_check",
    "restricted_identity_check",
    "acceptance",
    "cli",
]

sample_rank_r = _salmon.sample_rank_r
sample_dense = _salmon.sample_dense
sample_special_form = _salmon.sample_special_form
sample_essentially_234 = _salmon.sample_essentially_234
matmul_tensor = _salmon.matmul_tensor

_PACKAGED_LM = Path(__file__).with_name("data") / "lm6.txt"


def lm_file(path: str | os.PathLike | None = None) -> str:
    """Explicit path, else $SALMON_LM_FILE, else the file shipped with the wheel,
    else the source-tree default compiled into the extension."""
    if path:
        return os.fspath(path)
    if os.environ.get("SALMON_LM_FILE"):
        return os.environ["SALMON_LM_FILE"]
    if _PACKAGED_LM.is_file():
        return str(_PACKAGED_LM)
    return _salmon.default_lm_path()


def tensor(entries: Sequence[Sequence[Sequence[object]]], mode: str = "rational", prime: int = 2**31 - 1) -> Tensor:
    """Builds a tensor from nested lists indexed T[i][j][k]. Exact entries may be
    ints or strings such as "3/4"."""
    m, n, l = len(entries), len(entries[0]), len(entries[0][0])
    flat = []
    for k in range(l):
        for i in range(m):
            for j in range(n):
                v = entries[i][j][k]
                flat.append(float(v) if mode == "float" else str(v))
    doc = {"dims": [m, n, l], "mode": mode, "entries": flat}
    if mode == "gfp":
        doc["modulus"] = prime
        doc["entries"] = [int(v) for v in flat]
    return Tensor.from_json(json.dumps(doc))


def check_334(t: Tensor, route: str = "b", lm: str | None = None) -> dict:
    """Route A (degree 9 + 16) or route B (degree 9 + 6) on a 3x3x4 tensor."""
    return json.loads(_salmon.membership_334(t, route, lm_file(lm)))


def check_444(t: Tensor, trials: int = 32, mode: str = "modp", prime: int = 2**31 - 1, seed: int = 0,
              lm: str | None = None) -> dict:
    return json.loads(_salmon.membership_444(t, trials, mode, prime, seed, lm_file(lm)))


def float_check(t: Tensor, with_lm: bool = True, lm: str | None = None) -> dict:
    return json.loads(_salmon.float_check(t, with_lm, lm_file(lm)))


def restricted_identity_check(lm: str | None = None) -> dict:
    return json.loads(_salmon.restricted_identity_check(lm_file(lm)))


def acceptance(criteria: Iterable[int] = (), lm: str | None = None) -> dict:
    return json.loads(_salmon.run_acceptance(list(criteria), lm_file(lm)))


def cli(args: Sequence[str]) -> tuple[int, str, str]:
    """Runs the command line in-process: (exit code, stdout, stderr)."""
    if not os.environ.get("SALMON_LM_FILE") and _PACKAGED_LM.is_file():
        os.environ["SALMON_LM_FILE"] = str(_PACKAGED_LM)
    return _salmon.cli_run(["salmon", *args])
