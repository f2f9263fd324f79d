"""
Channel, detector and feedforward parameters.
"""

from pydantic import BaseModel, ConfigDict, Field

from src.core.constants import (
    DEFAULT_ATTENUATION_LENGTH_KM,
    DEFAULT_C_FIBER_M_PER_S,
    DEFAULT_ETA_DET,
    DEFAULT_TAU_S,
)


class SystemParams(BaseModel):
    """
    Physical parameters of one link configuration.

    Charlie sits halfway, so each user reaches him through distance_km / 2.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [
                {
                    "distance_km": 100.0,
                    "attenuation_length_km": 22.0,
                    "eta_det": 0.9,
                    "tau_s": 6.7e-8,
                    "c_fiber_m_per_s": 2.0e8,
                }
            ]
        },
    )

    distance_km: float = Field(default=0.0, ge=0, description="Alice-Bob distance L in km")
    attenuation_length_km: float = Field(
        default=DEFAULT_ATTENUATION_LENGTH_KM,
        gt=0,
        description="Fiber attenuation length L_att in km",
    )
    eta_det: float = Field(
        default=DEFAULT_ETA_DET, ge=0, le=1, description="Detector efficiency"
    )
    tau_s: float = Field(default=DEFAULT_TAU_S, ge=0, description="Feedforward time in seconds")
    c_fiber_m_per_s: float = Field(
        default=DEFAULT_C_FIBER_M_PER_S, gt=0, description="Speed of light in fiber, m/s"
    )

    def at_distance(self, distance_km: float) -> "SystemParams":
        """Return a copy evaluated at another distance."""
        return SystemParams(**{**self.model_dump(), "distance_km": distance_km})
