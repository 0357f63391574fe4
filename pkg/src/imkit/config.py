from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import UnknownTolerance


@dataclass(frozen=True)
class Config:
    """Numerical tolerances shared by all modules.

    The defaults are sized for double-precision spectral algorithms on
    matrices of dimension up to ~64.
    """

    herm: float = 1e-9
    tr: float = 1e-9
    psd: float = 1e-9
    orth: float = 1e-9
    recon: float = 1e-9
    norm: float = 1e-9
    bloch: float = 1e-9
    antisym: float = 1e-9
    real: float = 1e-9
    fid: float = 1e-9
    diag: float = 1e-9
    deg: float = 1e-9
    p0: float = 1e-12
    # eigenvalues of Im(rho) below this are assigned to the zero block
    lam0: float = 1e-10

    def replace(self, **overrides: float) -> "Config":
        unknown = sorted(set(overrides) - self.names())
        if unknown:
            raise UnknownTolerance(f"unknown tolerance name(s): {', '.join(unknown)}")
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})

    @classmethod
    def names(cls) -> set[str]:
        return {f.name for f in dataclasses.fields(cls)}


DEFAULT = Config()


def resolve(config: Config | None) -> Config:
    return DEFAULT if config is None else config
