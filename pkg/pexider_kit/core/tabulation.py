"""
Sampled representation of a solution tuple and its re-ingestion

Samples carry exact slopes, so re-ingested functions are Hermite cubics
through (x, value, slope). Every breakpoint (nested ones included) and
every node of an already tabulated body is a sample node, which keeps
piecewise polynomial tuples of degree ≤ 3 exact after the round trip.
"""
from typing import Dict, Optional
import logging

import numpy as np

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import ArtifactError, PexiderError
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D, Tabulated, Transported
from pexider_kit.core.solution_families import SolutionTuple
from pexider_kit.schemas.artifact import SampledFunction, SolutionArtifact

settings = get_settings()
logger = logging.getLogger(__name__)


def _tabulated_nodes(fn: Fn1D) -> np.ndarray:
    """Nodes of Hermite bodies reachable from fn, mapped into fn's coordinates"""
    found = []
    for piece in fn.pieces:
        body = piece.body
        if isinstance(body, Tabulated):
            found.append(body.nodes)
        elif isinstance(body, Transported):
            inner = _tabulated_nodes(body.inner)
            if inner.size:
                found.append((inner - body.inner_shift) / body.inner_scale)
    return np.concatenate(found) if found else np.zeros(0)


def tabulate(fn: Fn1D, n: Optional[int] = None) -> SampledFunction:
    """Sample fn at n uniform nodes on its closed domain plus its breakpoints"""
    n = settings.ARTIFACT_SAMPLES if n is None else n
    lo, hi = fn.domain.as_tuple()
    extra = np.concatenate((np.asarray(fn.breakpoints(), dtype=float), _tabulated_nodes(fn)))
    extra = extra[(extra > lo) & (extra < hi)]
    x = np.unique(np.concatenate((np.linspace(lo, hi, n), extra)))
    return SampledFunction(
        name=fn.name,
        domain=(lo, hi),
        x=x.tolist(),
        value=np.asarray(fn.eval(x, margin=0.0), dtype=float).tolist(),
        slope=np.asarray(fn.deriv(x, margin=0.0), dtype=float).tolist(),
    )


def from_tabulated(sample: SampledFunction) -> Fn1D:
    """Hermite re-ingest of a sampled function"""
    x = np.asarray(sample.x, dtype=float)
    values = np.asarray(sample.value, dtype=float)
    slopes = np.asarray(sample.slope, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(values)) and np.all(np.isfinite(slopes))):
        raise ArtifactError(f"{sample.name}: non-finite samples")
    if np.any(np.diff(x) <= 0):
        raise ArtifactError(f"{sample.name}: sample nodes are not strictly increasing")
    try:
        domain = OpenInterval(*sample.domain)
        return Fn1D.from_samples(domain, x, values, slopes, sample.name)
    except PexiderError as exc:
        raise ArtifactError(f"{sample.name}: {exc}") from exc


def to_artifact(
    s: SolutionTuple,
    provenance: Dict,
    bound: float,
    residual=None,
    params: Optional[Dict] = None,
    profiles=None,
    config: Optional[Dict] = None,
    n: Optional[int] = None,
) -> SolutionArtifact:
    functions = {name: tabulate(fn.renamed(name), n) for name, fn in s.functions.items()}
    logger.info(f"Tabulated {len(functions)} functions of the {s.family} tuple")
    return SolutionArtifact(
        provenance=provenance,
        family=s.family,
        regime=s.regime,
        I=s.I.as_tuple(),
        sumset=s.G.domain.as_tuple(),
        functions=functions,
        params=params or {},
        profiles=profiles,
        residual=residual,
        bound=bound,
        config=config or {},
    )


def from_artifact(artifact: SolutionArtifact) -> SolutionTuple:
    """Tabulated SolutionTuple from an artifact"""
    fns = {name: from_tabulated(sample) for name, sample in artifact.functions.items()}
    I = OpenInterval(*artifact.I)
    for name in ("F", "f1", "f2", "g1", "g2"):
        if fns[name].domain != I:
            raise ArtifactError(f"{name} is sampled on {fns[name].domain}, not on I={I}")
    return SolutionTuple(
        I=I,
        F=fns["F"], f1=fns["f1"], f2=fns["f2"], g1=fns["g1"], g2=fns["g2"], G=fns["G"],
        regime=artifact.regime,
        family=artifact.family,
        params=artifact.params,
    )
