"""FCIDUMP ingestion and spin-orbital Hamiltonian construction.

An FCIDUMP carries a namelist header (``&FCI NORB=..., NELEC=..., MS2=...``
terminated by ``&END`` or ``/``) followed by ``value i j k l`` records with
1-based spatial indices: ``i=j=k=l=0`` is the scalar core energy, ``k=l=0``
a one-electron element, anything else a two-electron integral in chemist
notation ``(ij|kl)``.
"""
from __future__ import annotations

import re

import numpy as np

from .fermion import FermionOperator, LadderProduct

SYMMETRY_TOL = 1e-10
DUPLICATE_TOL = 1e-10


class FcidumpParseError(ValueError):
    """Malformed FCIDUMP content; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class FcidumpIntegrityError(ValueError):
    """Duplicate records disagree beyond tolerance."""


class MolecularHamiltonian:
    """Spatial-orbital integrals plus metadata for one molecular system.

    ``h1`` is the one-electron matrix, ``h2`` the rank-4 two-electron
    tensor in chemist notation ``(ij|kl)``, both in Hartree.
    """

    __slots__ = ("n_spatial", "n_electrons", "core_energy", "h1", "h2",
                 "label")

    def __init__(self, n_spatial, n_electrons, core_energy, h1, h2,
                 label=""):
        self.n_spatial = int(n_spatial)
        self.n_electrons = int(n_electrons)
        self.core_energy = float(core_energy)
        self.h1 = np.asarray(h1, dtype=float)
        self.h2 = np.asarray(h2, dtype=float)
        self.label = label
        self._validate()

    def _validate(self):
        n = self.n_spatial
        if self.h1.shape != (n, n):
            raise ValueError(f"h1 shape {self.h1.shape} != ({n}, {n})")
        if self.h2.shape != (n, n, n, n):
            raise ValueError(f"h2 shape {self.h2.shape} != rank-4 over {n}")
        if not 0 < self.n_electrons <= 2 * n:
            raise ValueError(
                f"electron count {self.n_electrons} outside (0, {2 * n}]")
        if not np.allclose(self.h1, self.h1.T, atol=SYMMETRY_TOL):
            raise ValueError("h1 is not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if not np.allclose(self.h2, self.h2.transpose(perm),
                               atol=SYMMETRY_TOL):
                raise ValueError(
                    f"h2 violates permutational symmetry {perm}")

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    def __repr__(self):
        return (f"MolecularHamiltonian({self.label or 'unlabeled'}: "
                f"{self.n_spatial} orbitals, {self.n_electrons} electrons)")


_HEADER_KEY = re.compile(r"([A-Za-z][A-Za-z0-9]*)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z][A-Za-z0-9]*\s*=)|$)")


def _parse_header(lines):
    """Consume namelist lines; returns (fields, next_line_index)."""
    if not lines or not lines[0][1].lstrip().upper().startswith("&FCI"):
        line_no = lines[0][0] if lines else 1
        raise FcidumpParseError("expected '&FCI' namelist header", line_no)
    header_parts = []
    end_index = None
    for idx, (line_no, line) in enumerate(lines):
        text = line.strip()
        if idx == 0:
            text = text[4:]  # drop '&FCI'
        for terminator in ("&END", "/"):
            pos = text.upper().find(terminator)
            if pos >= 0:
                header_parts.append(text[:pos])
                end_index = idx
                break
        if end_index is not None:
            break
        header_parts.append(text)
    if end_index is None:
        raise FcidumpParseError("header never terminated by '&END' or '/'",
                                lines[-1][0])
    blob = " ".join(header_parts)
    fields = {}
    for key, value in _HEADER_KEY.findall(blob):
        fields[key.upper()] = value.strip().rstrip(",").strip()
    return fields, end_index + 1


def _header_int(fields, key, line_no):
    if key not in fields:
        raise FcidumpParseError(f"header missing {key}", line_no)
    try:
        return int(fields[key])
    except ValueError as exc:
        raise FcidumpParseError(f"bad {key} value {fields[key]!r}",
                                line_no) from exc


def _canonical_two_body(i, j, k, l):
    """Representative of the 8-fold symmetry orbit of (ij|kl)."""
    ij = (i, j) if i >= j else (j, i)
    kl = (k, l) if k >= l else (l, k)
    return max(ij + kl, kl + ij)


def parse_fcidump(text, label="") -> MolecularHamiltonian:
    """Parse FCIDUMP text (str or bytes) into a MolecularHamiltonian."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    numbered = [(no, line) for no, line in enumerate(text.splitlines(), 1)
                if line.strip()]
    fields, body_start = _parse_header(numbered)
    header_line = numbered[0][0]
    norb = _header_int(fields, "NORB", header_line)
    nelec = _header_int(fields, "NELEC", header_line)
    if "MS2" in fields:
        _header_int(fields, "MS2", header_line)  # validated, unused
    if norb <= 0:
        raise FcidumpParseError(f"NORB must be positive, got {norb}",
                                header_line)

    core = 0.0
    h1 = np.zeros((norb, norb))
    h2 = np.zeros((norb, norb, norb, norb))
    seen: dict[tuple, tuple[float, int]] = {}

    def record(key, value, line_no):
        if key in seen:
            old, old_line = seen[key]
            if abs(old - value) > DUPLICATE_TOL:
                raise FcidumpIntegrityError(
                    f"line {line_no}: record {key} = {value!r} conflicts "
                    f"with line {old_line} value {old!r}")
        seen[key] = (value, line_no)

    for line_no, line in numbered[body_start:]:
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpParseError(
                f"expected 'value i j k l', got {line.strip()!r}", line_no)
        try:
            value = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpParseError(f"bad record {line.strip()!r}",
                                    line_no) from exc
        if (i, j, k, l) == (0, 0, 0, 0):
            record(("core",), value, line_no)
            core = value
            continue
        for name, idx in (("i", i), ("j", j), ("k", k), ("l", l)):
            if idx < 0 or idx > norb:
                raise FcidumpParseError(
                    f"index {name}={idx} outside [0, {norb}]", line_no)
        if k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpParseError(
                    f"one-electron record needs i, j >= 1, got {i} {j}",
                    line_no)
            record(("h1", *sorted((i, j), reverse=True)), value, line_no)
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
        else:
            if min(i, j, k, l) == 0:
                raise FcidumpParseError(
                    f"two-electron record needs all indices >= 1, "
                    f"got {i} {j} {k} {l}", line_no)
            record(("h2", *_canonical_two_body(i, j, k, l)), value, line_no)
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c),
                               (b, a, d, c), (c, d, a, b), (d, c, a, b),
                               (c, d, b, a), (d, c, b, a)):
                h2[p, q, r, s] = value

    return MolecularHamiltonian(norb, nelec, core, h1, h2, label=label)


def write_fcidump(m: MolecularHamiltonian, ms2: int = 0) -> str:
    """Canonical serializer; parse(write(parse(x))) is bit-for-bit stable."""
    lines = [f"&FCI NORB={m.n_spatial},NELEC={m.n_electrons},MS2={ms2},",
             f" ORBSYM={','.join('1' for _ in range(m.n_spatial))},",
             " ISYM=1,", "&END"]
    n = m.n_spatial
    emitted = set()
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    key = _canonical_two_body(i + 1, j + 1, k + 1, l + 1)
                    value = m.h2[i, j, k, l]
                    if key in emitted or value == 0.0:
                        continue
                    emitted.add(key)
                    a, b, c, d = key
                    lines.append(f" {value:.17g} {a} {b} {c} {d}")
    for i in range(n):
        for j in range(i + 1):
            if m.h1[i, j] != 0.0:
                lines.append(f" {m.h1[i, j]:.17g} {i + 1} {j + 1} 0 0")
    lines.append(f" {m.core_energy:.17g} 0 0 0 0")
    return "\n".join(lines) + "\n"


def load_fcidump(path, label=None) -> MolecularHamiltonian:
    with open(path, "rb") as fh:
        text = fh.read()
    return parse_fcidump(text, label=label if label is not None else str(path))


def to_fermion_hamiltonian(m: MolecularHamiltonian):
    """Second-quantized Hamiltonian over interleaved spin orbitals.

    Returns ``(operator, core_energy)``. Two-body terms carry the standard
    1/2 factor with physicist integrals ``<pq|rs> = (pr|qs)`` and
    spin-conservation constraints; the scalar core energy is reported
    separately and added to every energy downstream.
    """
    n = m.n_spatial
    n_so = 2 * n
    products = []
    for p in range(n):
        for q in range(n):
            coeff = m.h1[p, q]
            if abs(coeff) < 1e-12:
                continue
            for spin in (0, 1):
                products.append(LadderProduct(
                    [(2 * p + spin, True), (2 * q + spin, False)], coeff))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    coeff = 0.5 * m.h2[p, r, q, s]  # <pq|rs> = (pr|qs)
                    if abs(coeff) < 1e-12:
                        continue
                    for sp in (0, 1):
                        for sq in (0, 1):
                            products.append(LadderProduct(
                                [(2 * p + sp, True), (2 * q + sq, True),
                                 (2 * s + sq, False), (2 * r + sp, False)],
                                coeff))
    return FermionOperator(n_so, products), m.core_energy


def mean_field_energy(m: MolecularHamiltonian) -> float:
    """Closed-form restricted mean-field energy from the integrals.

    Independent oracle for the expectation of the JW Hamiltonian on the
    Hartree-Fock reference determinant: doubly occupy the lowest
    ``n_electrons / 2`` spatial orbitals.
    """
    if m.n_electrons % 2:
        raise ValueError("mean-field formula assumes a closed shell")
    occ = range(m.n_electrons // 2)
    energy = m.core_energy
    for i in occ:
        energy += 2.0 * m.h1[i, i]
        for j in occ:
            energy += 2.0 * m.h2[i, i, j, j] - m.h2[i, j, j, i]
    return energy
