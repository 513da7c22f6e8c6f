"""Built-in germs with short provenance notes."""

from __future__ import annotations

from dataclasses import dataclass

from .germ import MapGerm, parse_germ_text


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    text: str
    note: str

    def germ(self) -> MapGerm:
        return parse_germ_text(self.text, label=self.name)


_ENTRIES = [
    CatalogEntry(
        "xy_z2",
        "vars: x y z\nG1 = x*y\nG2 = z^2\n",
        "(xy, z^2) on R^3: radial homogeneous, discriminant = upper vertical ray plus the "
        "horizontal axis, Milnor set off the discriminant preimage has 8 arcs on each sphere",
    ),
    CatalogEntry(
        "ex31_n3",
        "vars: x1 x2 x3\nG1 = x1\nG2 = x2^2 - x3^2\n",
        "(x1, x2^2 - x3^2) on R^3: Sing G is the x1-axis, discriminant is the horizontal axis",
    ),
    CatalogEntry(
        "ex31_n4",
        "vars: x1 x2 x3 x4\nG1 = x1\nG2 = x2^2 + x3^2 - x4^2\n",
        "(x1, x2^2 + x3^2 - x4^2) on R^4: M(Psi_G) = Sing G, sphere fibration via rho-regularity",
    ),
    CatalogEntry(
        "fgbar_quadric",
        "cvars: z1 z2\nf = z1^2 + z2^2\ng = z1^2 - z2^2\n"
        "flag icis: (f, g) is an isolated complete intersection at 0\n"
        "flag coprime: f and g have no common factor\n",
        "F = f * conj(g) with f = z1^2 + z2^2, g = z1^2 - z2^2; coprime pair defining an ICIS",
    ),
    CatalogEntry(
        "product_xy_t",
        "vars: x y t\nG1 = x*y\nG2 = t\n",
        "product construction (f, g) in separate variables with f = xy and g = t",
    ),
    CatalogEntry(
        "linear_proj_3_2",
        "vars: x1 x2 x3\nG1 = x1\nG2 = x2\n",
        "linear projection R^3 -> R^2: empty Sing G, M(G) = {x3 = 0}",
    ),
    CatalogEntry(
        "linear_proj_4_2",
        "vars: x1 x2 x3 x4\nG1 = x1\nG2 = x2\n",
        "linear projection R^4 -> R^2: empty Sing G, M(G) = {x3 = x4 = 0}",
    ),
    CatalogEntry(
        "polar_z1z2bar",
        "cvars: z1 z2\nF = z1*conj(z2)\n",
        "mixed function z1 * conj(z2): polar weighted homogeneous with weights (2, 1), degree 1",
    ),
    CatalogEntry(
        "nonnice_x_xy",
        "vars: x1 y1 x2 y2\nG1 = x1\nG2 = y1\nG3 = x1*x2 - y1*y2\nG4 = x1*y2 + y1*x2\n",
        "realified (z1, z1*z2) on C^2: image is not a set germ, so niceness stays undecided",
    ),
]

CATALOG = {e.name: e for e in _ENTRIES}


def catalog_names() -> list[str]:
    return [e.name for e in _ENTRIES]


def catalog_germ(name: str) -> MapGerm:
    try:
        return CATALOG[name].germ()
    except KeyError:
        raise KeyError(f"no catalog germ named {name!r}") from None


def listing() -> str:
    width = max(len(n) for n in CATALOG)
    lines = []
    for e in _ENTRIES:
        g = e.germ()
        lines.append(f"{e.name:<{width}}  R^{g.m} -> R^{g.p}  {e.note}")
    return "\n".join(lines) + "\n"
