"""The lone-particle world: one particle fixed at the spatial center forever.

The constraint law admits exactly one world, so its model set is the
minimal strongly deterministic fixture: a singleton with a constant
trajectory.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..modal import FiniteWorld, ModelSet

__all__ = ["LoneParticleWorld", "lone_particle_model_set"]

POSITION_LABEL = "x0"


@dataclass(frozen=True)
class LoneParticleWorld:
    """Constant trajectory at the absolute center, for a finite duration."""

    duration: int
    position: str = POSITION_LABEL

    def __post_init__(self):
        if self.duration < 1:
            raise ValidationError("duration must be >= 1")

    def world(self) -> FiniteWorld:
        return FiniteWorld("lone-particle", {t: self.position for t in range(self.duration)})


def lone_particle_model_set(duration: int) -> ModelSet:
    """Singleton model set of the lone-particle law."""
    lp = LoneParticleWorld(duration)
    return ModelSet((lp.world(),), range(duration), actual_id="lone-particle")
