"""Workspace manifests and the bundled corpus.

References accepted wherever a complex is expected: a manifest name, or
``sd(X)`` for the barycentric subdivision of a reference ``X``.  Covers may
additionally be written ``STAR(X)``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Union

from .complex import EdgePath, SimplicialComplex, build_complex, edge_path, transport_path
from .cover import CombinatorialCover, cover_from_json, star_cover
from .groups.membership import Budget
from .tower import CoverTower, build_star_tower

ENV_VAR = "CSW_CORPUS_DIR"


class UnresolvedReference(LookupError):
    pass


@dataclass
class WorkspaceManifest:
    complexes: Dict[str, dict]
    covers: Dict[str, dict] = field(default_factory=dict)
    towers: Dict[str, object] = field(default_factory=dict)
    loops: Dict[str, Dict[str, List[str]]] = field(default_factory=dict)
    cover_instances: List[str] = field(default_factory=list)
    budgets: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self._complexes: Dict[str, SimplicialComplex] = {}
        self._covers: Dict[tuple, CombinatorialCover] = {}

    @classmethod
    def from_json(cls, data: dict) -> "WorkspaceManifest":
        ws = cls(data.get("complexes", {}), data.get("covers", {}), data.get("towers", {}),
                 data.get("loops", {}), data.get("cover_instances", []), data.get("budgets", {}))
        ws.validate()
        return ws

    def validate(self) -> None:
        for name in self.complexes:
            self.complex(name)
        for name in self.covers:
            self.cover(name)
        for name in self.towers:
            self.tower(name)
        for base, loops in self.loops.items():
            K = self.complex(base)
            for vs in loops.values():
                edge_path(K, vs)
        for name in self.cover_instances:
            self.cover(name)
        for k, v in self.budgets.items():
            if not isinstance(v, int) or v <= 0:
                raise ValueError(f"budget {k} must be a positive integer")

    # -- resolution ----------------------------------------------------------

    def complex(self, ref: str) -> SimplicialComplex:
        ref = ref.strip()
        if ref in self._complexes:
            return self._complexes[ref]
        m = re.fullmatch(r"sd\((.*)\)", ref)
        if m:
            K = self.complex(m.group(1)).subdivide(1)
        elif ref in self.complexes:
            K = build_complex(self.complexes[ref]["top_simplices"], ref)
        else:
            raise UnresolvedReference(f"unknown complex {ref!r}")
        self._complexes[ref] = K
        return K

    def cover(self, ref: str, working_level: Optional[int] = None) -> CombinatorialCover:
        ref = ref.strip()
        key = (ref, working_level)
        if key in self._covers:
            return self._covers[key]
        m = re.fullmatch(r"STAR\((.*)\)", ref)
        if m:
            K = self.complex(m.group(1))
            c = star_cover(K, 1 if working_level is None else working_level,
                           K.root.vertices[0], name=f"STAR({m.group(1)})")
        elif ref in self.covers:
            data = dict(self.covers[ref], name=ref)
            if working_level is not None:
                data["working_level"] = working_level
            c = cover_from_json(data, self.complex)
        else:
            raise UnresolvedReference(f"unknown cover {ref!r}")
        self._covers[key] = c
        return c

    def tower(self, ref: Union[str, list, dict], working_level: Optional[int] = None) -> CoverTower:
        spec = ref
        if isinstance(ref, str):
            text = ref.strip()
            if text in self.towers:
                spec = self.towers[text]
            elif text.startswith(("[", "{")):
                spec = json.loads(text)
            else:
                raise UnresolvedReference(f"unknown tower {ref!r}")
        if isinstance(spec, dict) and "star_tower" in spec:
            st = spec["star_tower"]
            return build_star_tower(self.complex(st["base"]), int(st["depth"]), budget=self.budget())
        if isinstance(spec, list):
            return CoverTower([self.cover(c, working_level) for c in spec], self.budget())
        raise UnresolvedReference(f"malformed tower {ref!r}")

    def loop(self, ref: Union[str, List[str]], K: SimplicialComplex) -> EdgePath:
        """A named loop of ``K``'s root complex, a JSON list, or a whitespace
        separated vertex sequence; carried to ``K`` by subdivision."""
        if isinstance(ref, str):
            text = ref.strip()
            named = self.loops.get(K.root.name, {})
            if text in named:
                verts = named[text]
            elif text.startswith("["):
                verts = json.loads(text)
            else:
                verts = text.split()
        else:
            verts = list(ref)
        for cand in K.lineage()[::-1] + [K]:
            if all(v in cand.adjacency for v in verts):
                try:
                    p = edge_path(cand, verts)
                except ValueError:
                    continue
                return transport_path(p, K) if cand != K else p
        raise UnresolvedReference(f"{ref!r} is not an edge path on {K.name} or its ancestors")

    def budget(self, **overrides) -> Budget:
        b = dict(self.budgets)
        b.update({k: v for k, v in overrides.items() if v is not None})
        return Budget(max_cosets=b.get("max_cosets", 2000),
                      max_conjugates=b.get("search_depth", 4),
                      max_conjugator_length=b.get("conjugator_length", 8))


def corpus_path() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override) / "corpus.json"
    return Path(str(resources.files("cechspanier") / "data" / "corpus.json"))


def load_manifest(path: Optional[Union[str, Path]] = None) -> WorkspaceManifest:
    p = Path(path) if path else corpus_path()
    with open(p, encoding="utf-8") as fh:
        return WorkspaceManifest.from_json(json.load(fh))


def corpus() -> WorkspaceManifest:
    return load_manifest()
