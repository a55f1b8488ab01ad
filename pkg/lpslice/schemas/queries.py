import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lpslice.core.config import settings
from lpslice.schemas.domain import Direction, Exponent


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default_factory=lambda: settings.QUAD_ABS_TOL, gt=0.0, le=1e-8)
    max_periods: int = Field(default_factory=lambda: settings.PSI_MAX_PERIODS, gt=0)


class SectionQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: Direction
    p: Exponent
    samples: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLES, gt=0)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2 ** 64)


class ProjectionQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: Direction
    q: Exponent
    samples: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLES, gt=0)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2 ** 64)

    @field_validator("q")
    @classmethod
    def check_q(cls, q: Exponent) -> Exponent:
        if q.is_infinite or q.value > 2.0:
            raise ValueError("projection exponent must lie in [1, 2]")
        return q


class CaseTwoConfig(BaseModel):
    """Parameters of the near-extremizer reduction for sections or projections.

    `exponent` is p on the section side and q on the projection side; the
    projection side works with p = q/(q-1). `c` defaults to p/8, a desk-scale
    choice that keeps every hypothesis satisfiable for moderate p.
    """
    model_config = ConfigDict(frozen=True)

    side: Literal["section", "projection"]
    exponent: Exponent
    a: Direction
    c: Optional[float] = Field(default=None, gt=0.0)
    L: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def check_side(self) -> "CaseTwoConfig":
        if self.exponent.is_infinite:
            raise ValueError("case-two configuration needs a finite exponent")
        if self.side == "projection" and not 1.0 < self.exponent.value < 2.0:
            raise ValueError("projection side needs q in (1, 2)")
        if self.side == "section" and self.exponent.value <= 2.0:
            raise ValueError("section side needs p > 2")
        if self.a.n < 2:
            raise ValueError("case-two configuration needs n >= 2")
        return self

    @property
    def p(self) -> float:
        """Section exponent, or q/(q-1) on the projection side"""
        if self.side == "section":
            return self.exponent.value
        q = self.exponent.value
        return q / (q - 1.0)

    @property
    def c_value(self) -> float:
        return self.c if self.c is not None else self.p / 8.0

    @property
    def L_value(self) -> float:
        """L implied by p = Lc + 2 unless given"""
        if self.L is not None:
            return self.L
        return (self.p - 2.0) / self.c_value

    @property
    def threshold(self) -> float:
        """p0 = Lc + 2 on the section side, q0 = (Lc+2)/(Lc+1) on the projection side"""
        lc = self.L_value * self.c_value
        return lc + 2.0 if self.side == "section" else (lc + 2.0) / (lc + 1.0)


class ScanRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    exponent: float
    diagonal_value: float
    ball_value: float
    difference: float
    n_used: Union[int, Literal["limit"]]

    @model_validator(mode="before")
    @classmethod
    def fill_difference(cls, data):
        if isinstance(data, dict) and "difference" not in data:
            data = dict(data)
            data["difference"] = data["diagonal_value"] - data["ball_value"]
        return data

    @model_validator(mode="after")
    def check_difference(self) -> "ScanRow":
        if not math.isclose(self.difference, self.diagonal_value - self.ball_value, rel_tol=0.0, abs_tol=1e-15):
            raise ValueError("difference must equal diagonal_value - ball_value")
        return self


class SzarekConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta0: float
    gamma0: float
    c0: float
    c1: float
    c2: float
    kappa1: float

    @property
    def candidates(self) -> dict:
        return {"c0": self.c0, "c1": self.c1, "c2": self.c2, "gamma0": self.gamma0}


class BallConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    c1_near: float
    c1_near_delta: float
    psi_margin: float
    far_composite: float
    c2_far: float
    gamma0: float
    gamma0_term: float
    kappa_inf: float

    @property
    def candidates(self) -> dict:
        return {
            "c1_near": self.c1_near,
            "c2_far/sqrt2": self.c2_far / math.sqrt(2.0),
            "2gamma0/(1+gamma0*sqrt2)": self.gamma0_term,
        }
