from typing import List, Tuple

from .base import Formulation
from lib.groebner import eliminate, fresh_variable
from lib.polyring import MPoly

class LagrangeFormulation(Formulation):

    class Config:
        id = "lambda"
        name = "Lagrange multipliers"
        description = "Adds one multiplier per active constraint and eliminates the multipliers"

    def multiplier_ideal(self, h: MPoly, stratum) -> Tuple[List[MPoly], List[str]]:
        """Generators of ⟨Σ λ_i ∂_j f_i - ∂_j h⟩ plus the proportionality
        equations, in the ring extended by the multipliers, and the names
        of the multipliers."""
        ring = self.ring
        names = list()
        ext = ring
        for i in stratum.index_set:
            names.append(fresh_variable(ext, f"λ{i + 1}"))
            ext = ring.extended(names)

        fs = [self.fs[i].embed(ext) for i in stratum.index_set]
        lams = [ext.gen(name) for name in names]
        h = h.embed(ext)

        gens = list()
        for j in range(len(ring.variables)):
            g = -h.partial_derivative(j)
            for lam, f in zip(lams, fs):
                g = g + lam * f.partial_derivative(j)
            if not g.is_zero:
                gens.append(g)
        gens.extend(p.embed(ext) for p in self.proportionality(stratum))
        return gens, names

    def critical_locus(self, h: MPoly, stratum) -> List[MPoly]:
        gens, names = self.multiplier_ideal(h, stratum)
        if not names:
            return gens
        return eliminate(gens, names, shrink=True)
