#!/usr/bin/env python3
"""Generate the H2 FCIDUMP fixtures and their reference FCI energies.

Run once from the repository root:

    python3 fixtures/generate_fixtures.py

Everything here is deliberately independent of the vcsqse package: molecular
integrals come from closed-form expressions for contracted s-type Gaussians
(minimal STO-3G / STO-6G hydrogen bases), the molecular orbitals of the
symmetric dimer are fixed by symmetry, and the reference full-CI energies are
obtained from a first-quantized two-electron Hamiltonian in the
antisymmetrized spin-orbital product basis. Reference values are recorded in
references.json next to the FCIDUMP files.
"""

import json
import math
from pathlib import Path

import numpy as np

BOHR_PER_ANGSTROM = 1.0 / 0.52917721092

# Hydrogen 1s minimal bases (exponent, contraction) for normalized primitives.
STO3G_H = [(3.425250914, 0.1543289673),
           (0.6239137298, 0.5353281423),
           (0.1688554040, 0.4446345422)]
STO6G_H = [(35.52322122, 0.00916359628),
           (6.513143725, 0.04936149294),
           (1.822142904, 0.16853830490),
           (0.625955266, 0.37056279970),
           (0.243076747, 0.41649152980),
           (0.100112428, 0.13033408410)]


def boys_f0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


class ContractedS:
    """Normalized contracted s-type Gaussian on a center."""

    def __init__(self, primitives, center):
        self.center = np.asarray(center, dtype=float)
        self.exps = np.array([a for a, _ in primitives])
        coefs = np.array([c for _, c in primitives])
        norms = (2.0 * self.exps / math.pi) ** 0.75
        self.coefs = coefs * norms
        self_overlap = 0.0
        for a, ca in zip(self.exps, self.coefs):
            for b, cb in zip(self.exps, self.coefs):
                self_overlap += ca * cb * (math.pi / (a + b)) ** 1.5
        self.coefs /= math.sqrt(self_overlap)


def _pairs(ga, gb):
    for a, ca in zip(ga.exps, ga.coefs):
        for b, cb in zip(gb.exps, gb.coefs):
            yield a, ca, b, cb


def overlap(ga, gb):
    ab2 = float(np.dot(ga.center - gb.center, ga.center - gb.center))
    total = 0.0
    for a, ca, b, cb in _pairs(ga, gb):
        p = a + b
        total += ca * cb * (math.pi / p) ** 1.5 * math.exp(-a * b / p * ab2)
    return total


def kinetic(ga, gb):
    ab2 = float(np.dot(ga.center - gb.center, ga.center - gb.center))
    total = 0.0
    for a, ca, b, cb in _pairs(ga, gb):
        p = a + b
        mu = a * b / p
        s = (math.pi / p) ** 1.5 * math.exp(-mu * ab2)
        total += ca * cb * mu * (3.0 - 2.0 * mu * ab2) * s
    return total


def nuclear(ga, gb, centers_charges):
    ab2 = float(np.dot(ga.center - gb.center, ga.center - gb.center))
    total = 0.0
    for a, ca, b, cb in _pairs(ga, gb):
        p = a + b
        mu = a * b / p
        pc = (a * ga.center + b * gb.center) / p
        pref = ca * cb * 2.0 * math.pi / p * math.exp(-mu * ab2)
        for center, charge in centers_charges:
            t = p * float(np.dot(pc - center, pc - center))
            total -= charge * pref * boys_f0(t)
    return total


def eri(ga, gb, gc, gd):
    """Chemist-notation (ab|cd) over contracted s functions."""
    ab2 = float(np.dot(ga.center - gb.center, ga.center - gb.center))
    cd2 = float(np.dot(gc.center - gd.center, gc.center - gd.center))
    total = 0.0
    for a, ca, b, cb in _pairs(ga, gb):
        p = a + b
        centre_p = (a * ga.center + b * gb.center) / p
        ka = math.exp(-a * b / p * ab2)
        for c, cc, d, cd_ in _pairs(gc, gd):
            q = c + d
            pq = p * q / (p + q)
            centre_q = (c * gc.center + d * gd.center) / q
            kb = math.exp(-c * d / q * cd2)
            diff = centre_p - centre_q
            t = pq * float(np.dot(diff, diff))
            total += (ca * cb * cc * cd_ * 2.0 * math.pi ** 2.5
                      / (p * q * math.sqrt(p + q)) * ka * kb * boys_f0(t))
    return total


def h2_mo_integrals(r_angstrom, primitives):
    """One-/two-electron MO integrals and nuclear repulsion for H2.

    The canonical restricted MOs of the symmetric dimer are the normalized
    sum and difference of the two atomic functions.
    """
    r = r_angstrom * BOHR_PER_ANGSTROM
    centers = [np.zeros(3), np.array([0.0, 0.0, r])]
    aos = [ContractedS(primitives, c) for c in centers]
    charges = [(c, 1.0) for c in centers]

    n = 2
    s = np.array([[overlap(aos[i], aos[j]) for j in range(n)] for i in range(n)])
    hcore = np.array([[kinetic(aos[i], aos[j]) + nuclear(aos[i], aos[j], charges)
                       for j in range(n)] for i in range(n)])
    ao_eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    ao_eri[i, j, k, l] = eri(aos[i], aos[j], aos[k], aos[l])

    s01 = s[0, 1]
    c = np.zeros((2, 2))
    c[:, 0] = 1.0 / math.sqrt(2.0 * (1.0 + s01))
    c[:, 1] = np.array([1.0, -1.0]) / math.sqrt(2.0 * (1.0 - s01))

    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("ap,bq,cr,ds,abcd->pqrs", c, c, c, c, ao_eri)
    e_nuc = 1.0 / r
    return h_mo, eri_mo, e_nuc


def fci_levels(h_mo, eri_mo, e_nuc):
    """Two-electron FCI spectrum from a first-quantized product-basis build."""
    spin_orbitals = [(p, sp) for p in range(2) for sp in (0, 1)]

    def h1(i, k):
        pi, si = spin_orbitals[i]
        pk, sk = spin_orbitals[k]
        return h_mo[pi, pk] if si == sk else 0.0

    def v(i, j, k, l):
        # <ij|V|kl> with electron 1 on (i,k), electron 2 on (j,l)
        pi, si = spin_orbitals[i]
        pj, sj = spin_orbitals[j]
        pk, sk = spin_orbitals[k]
        pl, sl = spin_orbitals[l]
        if si != sk or sj != sl:
            return 0.0
        return eri_mo[pi, pk, pj, pl]

    dets = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    dim = len(dets)
    hmat = np.zeros((dim, dim))
    for a, (i, j) in enumerate(dets):
        for b, (k, l) in enumerate(dets):
            direct = v(i, j, k, l) + (h1(i, k) * (j == l) + h1(j, l) * (i == k))
            exch = v(i, j, l, k) + (h1(i, l) * (j == k) + h1(j, k) * (i == l))
            hmat[a, b] = direct - exch
    levels = np.linalg.eigvalsh(hmat) + e_nuc
    return [float(x) for x in levels]


def write_fcidump(path, h_mo, eri_mo, e_nuc):
    lines = ["&FCI NORB=2,NELEC=2,MS2=0,", " ORBSYM=1,1,", " ISYM=1,", "&END"]
    seen = set()
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for s in range(2):
                    key = tuple(sorted([tuple(sorted((p, q))), tuple(sorted((r, s)))]))
                    if key in seen:
                        continue
                    seen.add(key)
                    val = eri_mo[p, q, r, s]
                    if abs(val) > 1e-14:
                        lines.append(f"{val:23.16e} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}")
    for p in range(2):
        for q in range(p + 1):
            val = h_mo[p, q]
            if abs(val) > 1e-14:
                lines.append(f"{val:23.16e} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f"{e_nuc:23.16e}   0   0   0   0")
    Path(path).write_text("\n".join(lines) + "\n")


def generate(basis_name, primitives, bond_lengths, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    references = {}
    manifest = []
    for r in bond_lengths:
        h_mo, eri_mo, e_nuc = h2_mo_integrals(r, primitives)
        name = f"h2_{basis_name}_r{r:.4f}.fcidump"
        write_fcidump(out_dir / name, h_mo, eri_mo, e_nuc)
        levels = fci_levels(h_mo, eri_mo, e_nuc)
        references[name] = {
            "bond_length_angstrom": round(r, 6),
            "fci_ground": levels[0],
            "fci_levels_n2_sector": levels,
        }
        manifest.append(f"{r:.4f} {name}")
        print(f"{basis_name} R={r:7.4f}  E_FCI={levels[0]:.10f}")
    (out_dir / "references.json").write_text(json.dumps(references, indent=2) + "\n")
    if len(bond_lengths) > 1:
        header = "# bond_length(angstrom) fcidump\n"
        (out_dir / "sweep.manifest").write_text(header + "\n".join(manifest) + "\n")


def main():
    root = Path(__file__).resolve().parent
    generate("sto3g", STO3G_H, [0.7414], root / "h2_sto3g")
    sweep = [round(0.3 + 0.1 * i, 4) for i in range(28)]
    generate("sto6g", STO6G_H, sweep, root / "h2_sto6g")


if __name__ == "__main__":
    main()
