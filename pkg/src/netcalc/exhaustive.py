"""Brute-force checks over every small net, topology and map."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from netcalc.algebra import PartialLimitAlgebra, check_morphism
from netcalc.directed import all_directed_sets
from netcalc.net import Net, map_net
from netcalc.space import FiniteTopology, all_topologies, converges_to, limit


def small_nets(points: Sequence, max_size: int = 3) -> Iterator[Net]:
    """Every net into ``points`` over every directed set with at most ``max_size`` elements."""
    for size in range(1, max_size + 1):
        for ds in all_directed_sets(size):
            for values in itertools.product(points, repeat=size):
                yield Net(ds, values)


def all_maps(src: Sequence, dst: Sequence) -> Iterator[dict]:
    for image in itertools.product(dst, repeat=len(src)):
        yield dict(zip(src, image))


def functor_law_violations(points: Sequence = (0, 1, 2), max_size: int = 3) -> dict:
    """Counterexamples to identity and composition of the arrow map (empty when lawful)."""
    nets = list(small_nets(points, max_size))
    maps = list(all_maps(points, points))
    identity, composition = [], []
    for S in nets:
        if map_net(lambda x: x, S) != S:
            identity.append(S)
        for f in maps:
            fS = map_net(f.__getitem__, S)
            for g in maps:
                if map_net(g.__getitem__, fS) != map_net(lambda x: g[f[x]], S):
                    composition.append((S, f, g))
    return {"nets": len(nets), "maps": len(maps), "identity": identity,
            "composition": composition}


def limit_uniqueness_violations(max_points: int = 4, max_size: int = 3) -> dict:
    """Nets with two or more limits in a Hausdorff topology on at most ``max_points`` points."""
    spaces, checked, bad = 0, 0, []
    for n in range(1, max_points + 1):
        for top in all_topologies(tuple(range(n))):
            if not top.hausdorff:
                continue
            spaces += 1
            for S in small_nets(top.points, max_size):
                found = [x for x in top.points if converges_to(top, S, x)]
                out = limit(top, S)
                checked += 1
                if len(found) > 1 or (out.converged and found != [out.point]):
                    bad.append((top, S, found))
    return {"spaces": spaces, "nets": checked, "violations": bad}


def preimage_continuous(f: dict, X: FiniteTopology, Y: FiniteTopology) -> bool:
    """Open-set definition: the preimage of every open set is open."""
    return all(frozenset(x for x in X.points if f[x] in V) in X.opens for V in Y.opens)


def morphism_oracle_mismatches(max_points: int = 4, max_size: int = 3,
                               hausdorff_only: bool = True) -> dict:
    """Maps where the net verdict and the preimage verdict disagree.

    With ``hausdorff_only`` the net verdict comes from ``check_morphism``;
    otherwise from the convergence relation, which needs no unique limits.
    """
    spaces = [top for n in range(1, max_points + 1) for top in all_topologies(tuple(range(n)))
              if top.hausdorff or not hausdorff_only]
    nets = {top: list(small_nets(top.points, max_size)) for top in spaces}
    if hausdorff_only:
        # check_morphism is stated for converging sources only
        nets = {top: [S for S in ns if limit(top, S).converged] for top, ns in nets.items()}
    pairs, maps, bad = 0, 0, []
    for X, Y in itertools.product(spaces, repeat=2):
        pairs += 1
        for f in all_maps(X.points, Y.points):
            maps += 1
            if hausdorff_only:
                verdict = check_morphism(f.__getitem__, PartialLimitAlgebra(X),
                                         PartialLimitAlgebra(Y), nets[X]).passed
            else:
                verdict = _relational_morphism(f, X, Y, nets[X])
            if verdict != preimage_continuous(f, X, Y):
                bad.append((X, Y, f))
    return {"space_pairs": pairs, "maps": maps, "mismatches": bad}


def _relational_morphism(f: dict, X: FiniteTopology, Y: FiniteTopology, nets: list) -> bool:
    for S in nets:
        fS = map_net(f.__getitem__, S)
        for x in X.points:
            if converges_to(X, S, x) and not converges_to(Y, fS, f[x]):
                return False
    return True
