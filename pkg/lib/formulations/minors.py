import random
from typing import List

from .base import Formulation, jacobian, maximal_minors
from lib.groebner import saturate
from lib.polyring import MPoly

class MinorsFormulation(Formulation):

    class Config:
        id = "minors"
        name = "Jacobian minors"
        description = "Rank condition on the Jacobian of (h, f_I), saturated by the minors of Jac(f_I)"

    def saturating_minor(self, stratum) -> MPoly:
        """A random combination of the maximal minors of Jac(f_I). It
        vanishes on the points where the active constraints are singular."""
        rows = jacobian([self.fs[i] for i in stratum.index_set])
        # Seeded by the perturbation so the ideal only depends on its inputs.
        rnd = random.Random(repr((self.e.values, stratum.index_set)))
        g = self.ring.zero()
        for minor in maximal_minors(rows):
            g = g + minor * rnd.randint(1, 99)
        return g

    def critical_locus(self, h: MPoly, stratum) -> List[MPoly]:
        fs = [self.fs[i] for i in stratum.index_set]
        gens = maximal_minors(jacobian([h] + fs))
        gens.extend(self.proportionality(stratum))
        if not stratum.index_set:
            return gens
        if not gens:
            # Every point is critical; saturation cannot remove anything.
            return gens
        return saturate(gens, self.saturating_minor(stratum))
