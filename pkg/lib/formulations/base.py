from itertools import combinations
from typing import TYPE_CHECKING, Dict, List, Sequence, Tuple

from lib.config import Configurable, BasicConfig, skip_config_init
from lib.polyring import MPoly

if TYPE_CHECKING:
    from lib.critvals import Perturbation, StratumSpec

__all__ = (
    'FormulationConfig',
    'Formulation',
    'jacobian',
    'determinant',
    'maximal_minors',
)


def jacobian(polys: Sequence[MPoly]) -> List[List[MPoly]]:
    """Rows of partial derivatives, one row per polynomial."""
    return [[p.partial_derivative(j) for j in range(len(p.ring.variables))] for p in polys]


def determinant(matrix: Sequence[Sequence[MPoly]]) -> MPoly:
    """Laplace expansion along the rows, memoized on the remaining columns."""
    k = len(matrix)
    memo: Dict[Tuple[int, ...], MPoly] = dict()

    def expand(row: int, cols: Tuple[int, ...]) -> MPoly:
        if row == k:
            return matrix[0][0].ring.one()
        if cols in memo:
            return memo[cols]
        total = matrix[0][0].ring.zero()
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero:
                continue
            minor = expand(row + 1, cols[:pos] + cols[pos + 1:])
            if pos % 2:
                total = total - entry * minor
            else:
                total = total + entry * minor
        memo[cols] = total
        return total

    return expand(0, tuple(range(k)))


def maximal_minors(matrix: Sequence[Sequence[MPoly]]) -> List[MPoly]:
    """All nonzero k x k minors of a k-row matrix. Empty when the matrix has
    more rows than columns."""
    if not matrix:
        return []
    k = len(matrix)
    ncols = len(matrix[0])
    result = list()
    for cols in combinations(range(ncols), k):
        det = determinant([[row[c] for c in cols] for row in matrix])
        if not det.is_zero:
            result.append(det)
    return result


class FormulationConfig(BasicConfig):
    id: str
    name: str
    description: str

class Formulation(Configurable):
    """The base class for formulations. A formulation writes down the
    closure of the critical locus of a function on one stratum of the
    perturbed set, as an ideal in the original variables."""
    config: FormulationConfig

    @skip_config_init
    class Config:
        config_class=FormulationConfig

    def __init__(self, fs: Sequence[MPoly], e: 'Perturbation'):
        self.fs = tuple(fs)
        self.e = e
        self.ring = self.fs[0].ring

    def proportionality(self, stratum: 'StratumSpec') -> List[MPoly]:
        """Equations saying that f_i / (σ_i e_i) agree for all i in the
        stratum, i.e. the points lie on one perturbation level."""
        gens = list()
        for (a, i), (b, j) in combinations(enumerate(stratum.index_set), 2):
            ci = stratum.signs[a] * self.e.values[i]
            cj = stratum.signs[b] * self.e.values[j]
            g = self.fs[i] * cj - self.fs[j] * ci
            if not g.is_zero:
                gens.append(g)
        return gens

    def critical_locus(self, h: MPoly, stratum: 'StratumSpec') -> List[MPoly]:
        """Generators, in the original ring, of the ideal whose zeros are
        the critical points of h on the stratum together with their limits.

        Parameters
        ----------
        h : MPoly
            The function whose critical points are wanted
        stratum : StratumSpec
            Which constraints are active and with which signs

        Returns
        -------
        List[MPoly]
            Generators. An empty list stands for the zero ideal.
        """
        raise NotImplementedError
