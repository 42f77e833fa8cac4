"""Endomorphisms: the matrix-criterion enumeration, application and classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..coordgroup import CoordGroup
from ..errors import RefusedError
from ..fpgroup.catalog import builtin_presentation
from ..groupbase import FiniteGroup
from ..modmat import Mat3, Modulus, criterion_solution_array, format_matrix
from .homsearch import relators_hold

# |Z(G)|^3 central triples per criterion solution are materialized at once.
CENTER_TRIPLES_CAP = 2**22


@dataclass(frozen=True)
class EndoSpec:
    """Endomorphism given by the images of the designated generators.

    Coordinate-form specs also carry A (mod p^t) and the central parts z,
    with image of the i-th generator = a^A[i,0] b^A[i,1] c^A[i,2] z[i].
    """

    images: tuple[int, ...]
    A: Mat3 | None = None
    z: tuple[int, ...] | None = None

    @property
    def is_coord_form(self) -> bool:
        return self.A is not None

    def to_json(self, G: FiniteGroup) -> dict:
        if self.is_coord_form:
            return {"A": format_matrix(self.A), "z": [G.format_element(x) for x in self.z]}
        return {"images": [G.format_element(x) for x in self.images]}


@dataclass(frozen=True)
class EndoClass:
    tag: str  # "central_automorphism" | "image_central" | "other"
    is_automorphism: bool


def _require_coord(G) -> CoordGroup:
    if not isinstance(G, CoordGroup):
        raise TypeError("criterion enumeration needs a coordinate-model group")
    return G


def coord_presentation(G: CoordGroup):
    if not hasattr(G, "_coord_pres"):
        G._coord_pres = builtin_presentation("coord", params=G.params)
    return G._coord_pres


def criterion_solutions(G: CoordGroup) -> np.ndarray:
    """(N_A, 3, 3) array of criterion solutions for the group's T, row-major lex order."""
    G = _require_coord(G)
    if not hasattr(G, "_criterion_A"):
        G._criterion_A = criterion_solution_array(G.params.T)
    return G._criterion_A


def images_for(G: CoordGroup, A: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Generator images for coordinate data: A of shape (3, 3), z of shape (B, 3) -> (B, 3)."""
    mono = np.asarray(G.index(A[:, 0], A[:, 1], A[:, 2]), dtype=np.int64)
    return np.asarray(G.mul(mono[None, :], np.atleast_2d(z)))


def _central_triples(G: CoordGroup) -> np.ndarray:
    Z = G.center().elements
    n = Z.size**3
    if n > CENTER_TRIPLES_CAP:
        raise RefusedError(f"{n} central triples per matrix exceeds cap {CENTER_TRIPLES_CAP}", estimate=n)
    g = np.indices((Z.size,) * 3).reshape(3, -1).T
    return Z[g]


def coord_endo_blocks(G: CoordGroup, *, verify: bool = True) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per criterion solution A: (A, central triples, generator images), all verified against the relators."""
    G = _require_coord(G)
    zs = _central_triples(G)
    pres = coord_presentation(G)
    for A in criterion_solutions(G):
        imgs = images_for(G, A, zs)
        if verify:
            ok = relators_hold(G, imgs, pres)
            if not ok.all():
                bad = int(np.nonzero(~ok)[0][0])
                raise AssertionError(
                    f"criterion solution fails the relators: A={A.tolist()} z={zs[bad].tolist()}"
                )
        yield A, zs, imgs


def enumerate_endos(G: CoordGroup, *, verify: bool = True) -> Iterator[EndoSpec]:
    mod = G.params.T.modulus
    for A, zs, imgs in coord_endo_blocks(G, verify=verify):
        Amat = Mat3.from_array(A, mod)
        for z, im in zip(zs, imgs):
            yield EndoSpec(tuple(int(v) for v in im), Amat, tuple(int(v) for v in z))


def count_endos(G: CoordGroup) -> int:
    return len(criterion_solutions(G)) * G.center().order ** 3


def coord_endo_array(G: CoordGroup, *, verify: bool = True) -> np.ndarray:
    """All endomorphisms as an (N_A |Z|^3, 3) array of generator images."""
    return np.concatenate([imgs for _, _, imgs in coord_endo_blocks(G, verify=verify)])


def from_images(G: FiniteGroup, images) -> EndoSpec:
    return EndoSpec(tuple(int(v) for v in images))


def identity_endo(G: FiniteGroup) -> EndoSpec:
    if isinstance(G, CoordGroup):
        z = (G.identity,) * 3
        return EndoSpec(tuple(G.generators), Mat3.identity(G.params.T.modulus), z)
    return from_images(G, G.generators)


def trivial_endo(G: FiniteGroup) -> EndoSpec:
    if isinstance(G, CoordGroup):
        z = (G.identity,) * 3
        return EndoSpec(z, Mat3.zero(G.params.T.modulus), z)
    return from_images(G, [G.identity] * len(G.generators))


def apply_images(G: FiniteGroup, images: np.ndarray, xs=None) -> np.ndarray:
    """Images of ``xs`` (default: every element) under each row of ``images``; shape (B, len(xs))."""
    images = np.atleast_2d(np.asarray(images, dtype=np.int64))
    if isinstance(G, CoordGroup):
        xs = G.elements() if xs is None else np.asarray(xs, dtype=np.int64)
        i, j, k = G.coords(xs)
        pa = G.power(images[:, 0:1], i[None, :])
        pb = G.power(images[:, 1:2], j[None, :])
        pc = G.power(images[:, 2:3], k[None, :])
        return np.asarray(G.mul(G.mul(pa, pb), pc))
    full = G.evaluate_images(images)
    return full if xs is None else full[:, np.asarray(xs, dtype=np.int64)]


def apply(G: FiniteGroup, endo: EndoSpec, x):
    """Image of x (scalar or array); coordinate groups go through the normal form a^i b^j c^k."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.int64))
    out = apply_images(G, np.array([endo.images]), xs)[0]
    return int(out[0]) if np.ndim(x) == 0 else out


def is_automorphism(G: FiniteGroup, endo: EndoSpec) -> bool:
    return G.closure(endo.images).order == G.order


def classify_endo(G: FiniteGroup, endo: EndoSpec, Z=None) -> EndoClass:
    Z = Z if Z is not None else G.center()
    auto = is_automorphism(G, endo)
    gens = np.array(G.generators)
    imgs = np.array(endo.images)
    if auto and Z.contains(np.asarray(G.mul(G.inv(gens), imgs))).all():
        return EndoClass("central_automorphism", True)
    if Z.contains(imgs).all():
        return EndoClass("image_central", auto)
    return EndoClass("other", auto)


def compose(G: FiniteGroup, first: EndoSpec, second: EndoSpec) -> EndoSpec:
    """x -> second(first(x))."""
    imgs = apply_images(G, np.array([second.images]), np.array(first.images))[0]
    return from_images(G, imgs)


def basis_coordinates(G: FiniteGroup, m: int, Z=None) -> np.ndarray:
    """For each element x, the (i, j, k) in [0, m)^3 with x in a^i b^j c^k Z(G).

    Requires G/Z(G) to be the direct product of three cyclic groups of order m
    generated by the designated generators' images; raises otherwise.
    """
    if len(G.generators) != 3:
        raise ValueError("needs a 3-generator group")
    Z = Z if Z is not None else G.center()
    xs = G.elements()
    out = np.full((G.order, 3), -1, dtype=np.int64)
    a, b, c = G.generators
    for i in range(m):
        for j in range(m):
            for k in range(m):
                rep = G.mul(G.mul(G.power(a, i), G.power(b, j)), G.power(c, k))
                inside = Z.contains(np.asarray(G.mul(xs, G.inv(rep))))
                if np.any(out[inside, 0] >= 0):
                    raise ValueError("generator cosets mod Z(G) are not independent")
                out[inside] = (i, j, k)
    if np.any(out < 0):
        raise ValueError("generator cosets mod Z(G) do not cover G")
    return out


def extract_A(G: FiniteGroup, images: np.ndarray, m: int, Z=None) -> np.ndarray:
    """Matrices A (mod m) read off from generator images: row i = coset coordinates of image i."""
    images = np.atleast_2d(np.asarray(images, dtype=np.int64))
    if isinstance(G, CoordGroup) and m == G.params.p**G.params.t:
        i, j, k = G.coords(images)
        return np.stack([i % m, j % m, k % m], axis=-1)
    coords = basis_coordinates(G, m, Z)
    return coords[images]


def A_solution_set(G: FiniteGroup, images: np.ndarray, m: int) -> set[tuple[int, ...]]:
    return {tuple(int(v) for v in A.ravel()) for A in extract_A(G, images, m)}


def modulus_of(G: CoordGroup) -> Modulus:
    return G.params.T.modulus
