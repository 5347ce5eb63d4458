from .base import Formulation, determinant, jacobian, maximal_minors
from .lagrange import LagrangeFormulation
from .minors import MinorsFormulation

from typing import Tuple, Type

__all__ = (
    'ALL_FORMULATIONS',
    'get_formulation',
    'Formulation',
    'determinant',
    'jacobian',
    'maximal_minors',
)

ALL_FORMULATIONS: Tuple[Type[Formulation], ...] = (
    LagrangeFormulation,
    MinorsFormulation,
)

def get_formulation(formulation_id: str) -> Type[Formulation]:
    for formulation in ALL_FORMULATIONS:
        if formulation.config.id == formulation_id:
            return formulation
    raise ValueError(f"Unknown formulation {formulation_id!r}, expected one of: %s"
                     % ', '.join(f.config.id for f in ALL_FORMULATIONS))
