from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from secondchange.pls_sim.exception import ModelSpecError
from secondchange.pls_sim.models import MODEL_ID, MODELS, FilterDefinition


class PlsModelSpec(BaseModel):
    """A simulation model and its parameters.

    Args:
        model_id (str): One of I..VI and the primed power models I'..IV'.
        lam (float): Deviation parameter of the primed models; must stay 0 for the others.
        include_mean (bool): Add mu(t) = 8(-(t-0.5)^2 + 0.25) to the errors.
        ma_truncation (int): Number of terms kept from moving average series.
        burn_in (int): Warm-up steps of autoregressive recursions.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    model_id: MODEL_ID
    lam: float = 0.0
    include_mean: bool = True
    ma_truncation: int = Field(default=100, ge=1)
    burn_in: int = Field(default=200, ge=200)

    @model_validator(mode="after")
    def _check_lambda(self) -> "PlsModelSpec":
        definition = self.definition
        if definition.lambda_range is None:
            if self.lam != 0.0:
                raise ValueError(f"Model {self.model_id} takes no lambda parameter")
            return self
        low, high = definition.lambda_range
        if not low < self.lam < high:
            raise ValueError(f"Model {self.model_id} requires {low} < lambda < {high}, got {self.lam}")
        return self

    @classmethod
    def build(cls, **fields) -> "PlsModelSpec":
        """Like the constructor, raising ModelSpecError for unknown models or bad lambda."""
        try:
            return cls(**fields)
        except ValidationError as ex:
            raise ModelSpecError(f"Invalid model specification: {ex.errors()[0]['msg']}", exception=ex)

    @property
    def definition(self) -> FilterDefinition:
        return MODELS[self.model_id]


@dataclass(frozen=True)
class SecondOrderOracle:
    variance: Callable[[np.ndarray], np.ndarray]
    lag_correlation: Callable[[np.ndarray, int], np.ndarray]
