import math
from enum import Enum
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lpslice.core.exceptions import InvalidInputError

SQRT2 = math.sqrt(2.0)
NORM_TOL = 1e-12


class Exponent(BaseModel):
    """An exponent in [1, inf]; infinity is carried by the `infinite` tag"""
    model_config = ConfigDict(frozen=True)

    value: Optional[float] = None
    infinite: bool = False

    @model_validator(mode="after")
    def check_range(self) -> "Exponent":
        if self.infinite:
            if self.value is not None:
                raise ValueError("an infinite exponent carries no finite value")
            return self
        if self.value is None or not math.isfinite(self.value):
            raise ValueError("finite exponent requires a finite value")
        if self.value < 1.0:
            raise ValueError(f"exponent must be >= 1, got {self.value}")
        return self

    @classmethod
    def of(cls, raw: Union["Exponent", float, int, str]) -> "Exponent":
        """Parse a float, an int, 'inf' or an existing Exponent"""
        if isinstance(raw, Exponent):
            return raw
        if isinstance(raw, str):
            token = raw.strip().lower()
            if token in ("inf", "infinity", "∞"):
                return cls(infinite=True)
            try:
                raw = float(token)
            except ValueError:
                raise InvalidInputError(f"cannot parse exponent {raw!r}")
        if isinstance(raw, (int, float)) and math.isinf(raw) and raw > 0:
            return cls(infinite=True)
        try:
            return cls(value=float(raw))
        except ValidationError as exc:
            raise InvalidInputError(str(exc.errors()[0]["msg"]))

    @classmethod
    def inf(cls) -> "Exponent":
        return cls(infinite=True)

    @property
    def is_infinite(self) -> bool:
        return self.infinite

    @property
    def reciprocal(self) -> float:
        """1/p, with 1/inf = 0"""
        return 0.0 if self.infinite else 1.0 / self.value

    def as_float(self) -> float:
        return math.inf if self.infinite else self.value

    def dual(self) -> "Exponent":
        """Conjugate exponent p/(p-1)"""
        if self.infinite:
            return Exponent(value=1.0)
        if self.value == 1.0:
            return Exponent(infinite=True)
        return Exponent(value=self.value / (self.value - 1.0))

    @property
    def label(self) -> str:
        return "inf" if self.infinite else f"{self.value:.12g}"

    def __str__(self) -> str:
        return self.label


class Direction(BaseModel):
    """Unit vector in canonical form: nonnegative, sorted descending"""
    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...]

    @field_validator("coords", mode="before")
    @classmethod
    def normalize(cls, raw) -> Tuple[float, ...]:
        arr = np.abs(np.asarray(list(raw), dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("direction needs at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("direction coordinates must be finite")
        scale = float(np.max(arr))
        if scale == 0.0:
            raise ValueError("zero vector has no direction")
        # rescale first so the norm neither underflows nor overflows
        arr = arr / scale
        arr = np.sort(arr)[::-1] / float(np.linalg.norm(arr))
        return tuple(float(x) for x in arr)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def a1(self) -> float:
        return self.coords[0]

    @property
    def a2(self) -> float:
        return self.coords[1] if self.n > 1 else 0.0

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def support(self) -> np.ndarray:
        """Nonzero coordinates, still descending"""
        arr = self.array()
        return arr[arr > 0.0]

    def tail_mass(self) -> float:
        """1 - a1^2 - a2^2, clipped at zero"""
        return max(0.0, 1.0 - self.a1 ** 2 - self.a2 ** 2)

    @property
    def label(self) -> str:
        return ",".join(f"{x:.12g}" for x in self.coords)


class MCEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    std_error: float = Field(ge=0.0)
    samples: int = Field(gt=0)
    seed: int
    kurtosis: Optional[float] = None
    heavy_tail: bool = False

    @property
    def relative_error(self) -> float:
        return self.std_error / abs(self.mean) if self.mean else math.inf

    def agrees_with(self, value: float, k: float = 4.0, floor: float = 0.0) -> bool:
        """|mean - value| within k standard errors (or the absolute floor)"""
        return abs(self.mean - value) <= max(k * self.std_error, floor)

    @classmethod
    def exact(cls, value: float, seed: int = 0) -> "MCEstimate":
        """Deterministic value wrapped as a zero-error estimate"""
        return cls(mean=float(value), std_error=0.0, samples=1, seed=seed)


class StabilityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    direction: Direction
    deficit: float = Field(ge=0.0)
    functional_value: float
    bound: float
    margin: float
    method: str = "exact"
    std_error: float = 0.0


class VerdictStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class LemmaId(str, Enum):
    P_MEANS_DEFICIT = "p_means_deficit"
    TOP_PAIR_GAP = "top_pair_gap"
    RADIUS_L2 = "radius_l2"
    FACTOR_SIGN_COUPLING = "factor_sign_coupling"
    SECTION_EQUICONTINUITY = "section_equicontinuity"
    PROJECTION_EQUICONTINUITY = "projection_equicontinuity"
    SECTION_TWO_ATOM_GOAL = "section_two_atom_goal"
    PROJECTION_TWO_ATOM_GOAL = "projection_two_atom_goal"
    CP_SANDWICH = "cp_sandwich"
    CQ_SANDWICH = "cq_sandwich"
    RADIUS_DENSITY_FLOOR = "radius_density_floor"
    FACTOR_DENSITY_FLOOR = "factor_density_floor"
    RADIUS_EVENT = "radius_event"
    SPHERE_EVENT = "sphere_event"
    FACTOR_EVENT = "factor_event"
    STATED_CONSTANT = "stated_constant"
    ROBUST_SZAREK = "robust_szarek"
    ROBUST_BALL = "robust_ball"
    HAAGERUP_BOUND = "haagerup_bound"
    PSI_PLATEAU = "psi_plateau"
    SZAREK_CONSTANTS = "szarek_constants"
    BALL_CONSTANTS = "ball_constants"
    ORACLE_SECTION_2D = "oracle_section_2d"
    ORACLE_BALL_DIRECTION = "oracle_ball_direction"
    ORACLE_CUBE_FOURIER = "oracle_cube_fourier"
    ORACLE_PROJECTION_2D = "oracle_projection_2d"
    ORACLE_KHINCHIN = "oracle_khinchin"
    ORACLE_MIN_REPRESENTATION = "oracle_min_representation"
    ORACLE_MAX_REPRESENTATION = "oracle_max_representation"
    ORACLE_KONIG_KWAPIEN = "oracle_konig_kwapien"
    ORACLE_RADIUS_MOMENT = "oracle_radius_moment"
    ORACLE_FACTOR_MOMENT = "oracle_factor_moment"


class LemmaVerdict(BaseModel):
    """Outcome of one inequality check at one parameter point.

    `passed` reports the stated relation on the point values; `status` is the
    guarded outcome, which for Monte Carlo checks may be inconclusive.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lemma_id: LemmaId
    params: Dict[str, float] = Field(default_factory=dict)
    lhs: float
    rhs: float
    relation: str = ">="
    passed: bool = Field(alias="pass")
    status: VerdictStatus
    slack: float
    std_error: float = 0.0
    statement: str = ""

    @classmethod
    def evaluate(
        cls,
        lemma_id: LemmaId,
        lhs: float,
        rhs: float,
        relation: str = ">=",
        params: Optional[Dict[str, float]] = None,
        std_error: float = 0.0,
        guard: float = 4.0,
        statement: str = "",
        tol: float = 0.0,
    ) -> "LemmaVerdict":
        """Compare lhs against rhs; a nonzero std_error makes the verdict three-valued.

        `tol` absorbs rounding in deterministic checks and is added to the gap.
        """
        if relation not in (">=", "<=", "=="):
            raise InvalidInputError(f"unknown relation {relation!r}")
        if relation == "==":
            gap = -abs(lhs - rhs)
        else:
            gap = lhs - rhs if relation == ">=" else rhs - lhs
        gap += tol
        passed = gap >= 0.0
        band = guard * std_error
        if relation == "==":
            status = VerdictStatus.PASS if -gap <= band else VerdictStatus.FAIL
            passed = -gap <= band
        elif std_error == 0.0:
            status = VerdictStatus.PASS if passed else VerdictStatus.FAIL
        elif gap - band >= 0.0:
            status = VerdictStatus.PASS
        elif gap + band < 0.0:
            status = VerdictStatus.FAIL
        else:
            status = VerdictStatus.INCONCLUSIVE
        return cls(
            lemma_id=lemma_id,
            params={k: float(v) for k, v in (params or {}).items()},
            lhs=float(lhs),
            rhs=float(rhs),
            relation=relation,
            passed=passed,
            status=status,
            slack=abs(float(lhs) - float(rhs)),
            std_error=float(std_error),
            statement=statement,
        )


def canonicalize(raw) -> Direction:
    """Normalize an arbitrary nonzero vector into canonical form"""
    try:
        return Direction(coords=raw)
    except ValidationError as exc:
        raise InvalidInputError(str(exc.errors()[0]["msg"]))


def deficit(a: Direction) -> float:
    """Squared distance to (e1+e2)/sqrt(2), i.e. 2 - sqrt(2)(a1 + a2)"""
    value = 2.0 - SQRT2 * (a.a1 + a.a2)
    return min(2.0, max(0.0, value))
