"""End-to-end construction of F: C -> J_D, artifacts and the command line.

A run goes through the stages

    kernel -> theta -> quartic -> zeta -> octet -> lift -> isogeny -> report

and produces a JSON artifact holding the quartic model, the Aronhold data,
the squared theta constants, the Kummer transform, the rational map, the
anchor fixing the sign of psi and the verification report.  Field elements
are integer arrays (coefficients in the generator, constant term first).
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import dataclass, field as dc_field

from . import example_data
from .field import ExtField, InsufficientPrecision, ReconstructionFailure
from .hypercurve import HyperCurve, Degenerate
from .linalg import SingularLinearSystem
from .quartcurve import PlaneQuartic, Chart, QDiv, QJacobian
from .quartic_build import aronhold, riemann_model, bitangent_basis, zeta_set, AronholdSystem
from .theta import QuotientTheta, check_relations, ODD, EVEN
from .weil import weil_pairing
from .lift import (build_octet, express_octet, Lifter, image_point, kummer_transform,
                   kummer_transform_search, KummerTransform, NoConsistentTransform)
from .isogeny import (AffineModel, IsogenyBuilder, IsogenyMap, pullback_matrix,
                      model_divisor, image_class, check_state, SingularStep,
                      DenominatorVanishes)

log = logging.getLogger("g3isogeny")

FORMAT = "g3isogeny-artifact"
VERSION = 1


class PipelineError(RuntimeError):
    """A failure inside one stage of the run."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


class InvalidKernel(ValueError):
    pass


class InconsistentDLP(ArithmeticError):
    pass


class VersionMismatch(ValueError):
    pass


class MalformedInput(ValueError):
    pass


# ----------------------------------------------------------------------------
# configuration


def _elem(K, c):
    """Decode an element: an int (prime field) or a coefficient array."""
    if isinstance(c, int):
        return K(c)
    if isinstance(c, list) and len(c) <= K.k:
        return K.from_ints(list(c) + [0] * (K.k - len(c)))
    raise MalformedInput(f"bad field element {c!r}")


@dataclass
class RunConfig:
    p: int
    k: int
    modulus: list
    f: list
    kernel: list                  # [(u, v)] with element encodings
    ell: int = 3
    seed: int = 1
    precision: int = 80
    margin: int = 8
    retries: int = 3
    check_points: int = 4
    dlp: dict | None = None       # {"P": [x, y], "Q": [x, y], "m": int}
    extra: dict = dc_field(default_factory=dict)

    @classmethod
    def reference(cls, **kw):
        """The reference instance over F_257 with its 3-torsion kernel."""
        K = ExtField(example_data.P, example_data.K_DEG, example_data.MODULUS)
        enc = lambda c: K.to_ints(example_data.element(K, c))  # noqa: E731
        kernel = [([enc(c) for c in u], [enc(c) for c in v])
                  for u, v in (example_data.T1, example_data.T2, example_data.T3)]
        return cls(p=example_data.P, k=example_data.K_DEG, modulus=list(example_data.MODULUS),
                   f=list(example_data.F_COEFFS), kernel=kernel, ell=example_data.ELL,
                   dlp={"P": list(example_data.P1), "Q": list(example_data.P2),
                        "m": example_data.DLP_M}, **kw)

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": self.modulus, "f": self.f,
                "kernel": [[list(u), list(v)] for u, v in self.kernel], "ell": self.ell,
                "seed": self.seed, "precision": self.precision, "margin": self.margin,
                "retries": self.retries, "check_points": self.check_points,
                "dlp": self.dlp}

    @classmethod
    def from_json(cls, d):
        try:
            return cls(p=int(d["p"]), k=int(d["k"]), modulus=list(d["modulus"]),
                       f=list(d["f"]), kernel=[(u, v) for u, v in d["kernel"]],
                       ell=int(d.get("ell", 3)), seed=int(d.get("seed", 1)),
                       precision=int(d.get("precision", 80)), margin=int(d.get("margin", 8)),
                       retries=int(d.get("retries", 3)),
                       check_points=int(d.get("check_points", 4)), dlp=d.get("dlp"))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad run configuration: {exc}") from None

    def field(self):
        return ExtField(self.p, self.k, self.modulus)

    def curve(self, K):
        return HyperCurve(K, [_elem(K, c) for c in self.f])

    def generators(self, C):
        K = C.K
        return [C.mumford(K.poly([_elem(K, c) for c in u]), K.poly([_elem(K, c) for c in v]))
                for u, v in self.kernel]

    def point(self, K, P):
        return (_elem(K, P[0]), _elem(K, P[1]))


def validate_kernel(gens, ell, rng):
    """Three ell-torsion generators with trivial pairwise Weil pairing."""
    if ell % 2 == 0 or ell < 3:
        raise InvalidKernel("ell must be an odd prime")
    if len(gens) != 3:
        raise InvalidKernel("a maximal isotropic kernel needs three generators")
    for i, T in enumerate(gens):
        if not (T * ell).is_zero() or T.is_zero():
            raise InvalidKernel(f"generator {i + 1} is not of order {ell}")
    pairs = {}
    for i in range(3):
        for j in range(i + 1, 3):
            e = weil_pairing(gens[i], gens[j], ell, rng)
            pairs[f"{i + 1}{j + 1}"] = e
            if e != e ** 0:
                raise InvalidKernel(f"e_{ell}(T_{i + 1}, T_{j + 1}) != 1")
    return pairs


# ----------------------------------------------------------------------------
# the run


def _stage(name, fn, *args, **kw):
    t = time.time()
    try:
        out = fn(*args, **kw)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc
    log.info("%s: %.1fs", name, time.time() - t)
    return out


def _qdiv_json(D):
    K = D.chart.K
    return {"u": [K.to_ints(c) for c in D.u.coeffs()],
            "w": [K.to_ints(c) for c in D.w.coeffs()]}


def _qdiv_load(chart, d):
    K = chart.K
    return QDiv(chart, K.poly([K.from_ints(c) for c in d["u"]]),
                K.poly([K.from_ints(c) for c in d["w"]]))


class RunContext:
    """All intermediate objects of a run."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.K = cfg.field()
        self.C = cfg.curve(self.K)
        self.gens = cfg.generators(self.C)
        self.report = {}
        self.F = None

    def sub_rng(self):
        return random.Random(self.rng.getrandbits(64))

    # stages
    def run(self):
        cfg, K = self.cfg, self.K
        self.pairings = _stage("kernel", validate_kernel, self.gens, cfg.ell, self.sub_rng())
        self.report["kernel_torsion"] = True
        self.report["kernel_isotropic"] = True

        self.qt = _stage("theta", QuotientTheta, self.C, self.gens, cfg.ell, self.sub_rng())
        self.tsv = _stage("theta", self.qt.constants)
        self.report["vanishing_pattern"] = (
            sum(self.tsv[i].is_zero() for i in ODD) == 28
            and not any(self.tsv[i].is_zero() for i in EVEN))
        self.report["theta_relations"] = all(check_relations(self.tsv))

        self.aron = _stage("quartic", aronhold, self.tsv, K)
        self.model = _stage("quartic", riemann_model, self.aron)
        self.report["quartic_smooth"] = _stage("quartic", self.model.quartic.is_smooth)
        rng = self.sub_rng()
        self.bb = _stage("quartic", bitangent_basis, self.model, rng)
        self.report["bitangents"] = len(self.bb.contacts) == 7

        self.zset = _stage("zeta", zeta_set, self.bb, self.sub_rng())
        try:
            self.tau = _stage("zeta", kummer_transform, self.zset, self.tsv)
        except PipelineError as exc:
            if not isinstance(exc.cause, NoConsistentTransform):
                raise
            self.tau = _stage("zeta", kummer_transform_search, self.zset, self.tsv)

        rng = self.sub_rng()
        self.octet = _stage("octet", build_octet, self.bb, rng)
        self.report["octet_rank"] = self.octet.rank == 112
        self.M = _stage("octet", express_octet, self.octet, self.zset, rng)
        self.lifter = _stage("lift", Lifter, self.bb, self.octet, self.M)
        self.affine = AffineModel(self.model.quartic, self.lifter.forms)

        _stage("isogeny", self._build_map)
        _stage("report", self._checks)
        return self

    def image_pair(self, P):
        return image_point(self.qt, self.tau, self.lifter, P)

    def _base_point(self, rng):
        C = self.C
        bad = {tuple(self.K.to_ints(r)) for r in C.weierstrass_roots()}
        while True:
            x0, y0 = C.random_point(rng)
            if not y0.is_zero() and tuple(self.K.to_ints(x0)) not in bad:
                return x0, y0

    def _build_map(self):
        cfg = self.cfg
        rng = self.sub_rng()
        errors = []
        for attempt in range(cfg.retries):
            x0, y0 = self._base_point(rng)
            try:
                a, b = self.image_pair(self.C.point_divisor(x0, y0))
                psi = min(a, b, key=lambda c: c.key())
                v = self.qt.v_elements()[0]
                m, m_bar = pullback_matrix(self.qt, self.tau, self.lifter, self.affine,
                                           (x0, y0), psi, v)
                builder = IsogenyBuilder(self.K, self.C, self.affine, m, x0, y0)
                F = builder.build(model_divisor(psi.E), model_divisor((-psi).E),
                                  prec=cfg.precision, margin=cfg.margin,
                                  max_prec=2 * cfg.precision)
            except (SingularStep, Degenerate, SingularLinearSystem, InsufficientPrecision,
                    ReconstructionFailure, ArithmeticError) as exc:
                log.info("base point rejected: %s", exc)
                errors.append(exc)
                continue
            self.anchor = ((x0, y0), psi)
            self.m, self.m_bar = m, m_bar
            self.builder = builder
            self.F = F
            self.report["pullback_mirror"] = m_bar == [[-c for c in r] for r in m]
            fwd, mir = builder.states
            Vs = builder.V
            self.report["series_residuals"] = (
                all(check_state(self.K, self.affine, fwd, m, x0, Vs))
                and all(check_state(self.K, self.affine, mir, m, x0, -Vs)))
            return F
        raise SingularStep(f"no usable base point after {cfg.retries} attempts: {errors[-1]}")

    def image(self, P):
        """F(P) as a class on J_D, with the per-point lift as a fallback where
        the denominator vanishes (the sign is then fixed by the anchor)."""
        try:
            return image_class(self.bb.J, self.F, P)
        except (DenominatorVanishes, Degenerate):
            a, b = self.image_pair(self.C.point_divisor(*P))
            return a

    def _checks(self):
        cfg, C, J = self.cfg, self.C, self.bb.J
        rng = self.sub_rng()
        agree = conj = True
        for _ in range(cfg.check_points):
            x, y = C.random_point(rng)
            c = image_class(J, self.F, (x, y))
            a, b = self.image_pair(C.point_divisor(x, y))
            agree &= c == a or c == b
            conj &= (c + image_class(J, self.F, (x, -y))).is_zero()
        self.report["two_route"] = bool(agree)
        self.report["conjugate"] = bool(conj)
        (x0, y0), psi = self.anchor
        self.report["anchor"] = image_class(J, self.F, (x0, y0)) == psi
        if cfg.dlp:
            P = cfg.point(self.K, cfg.dlp["P"])
            Q = cfg.point(self.K, cfg.dlp["Q"])
            n = int(cfg.dlp["m"])
            DP, DQ = C.point_divisor(*P), C.point_divisor(*Q)
            self.report["dlp_source"] = (DP * n) == DQ
            self.report["dlp_image"] = (self.image(P) * n - self.image(Q)).is_zero()

    # artifact
    def artifact(self):
        K = self.K
        (x0, y0), psi = self.anchor
        ch = self.bb.chart
        return RunArtifact(
            config=self.cfg.to_json(),
            field=K.to_json(),
            curve=self.C.to_json(),
            quartic=self.model.quartic.to_json(),
            aronhold=self.aron.to_json(),
            tsv=[K.to_ints(c) for c in self.tsv],
            delta=list(self.qt.delta), v0=list(self.qt.v0),
            tau=self.tau.to_json(),
            isogeny=self.F.to_json(),
            anchor={"P": [K.to_ints(x0), K.to_ints(y0)], "R": _qdiv_json(psi.E)},
            jacobian={"chart": [[K.to_ints(c) for c in r] for r in ch.A],
                      "inf1": _qdiv_json(self.bb.J.inf1), "E0": _qdiv_json(self.bb.J.E0)},
            report=dict(self.report),
        )


def run_pipeline(cfg):
    """Run all stages; returns (artifact, context)."""
    ctx = RunContext(cfg).run()
    return ctx.artifact(), ctx


# ----------------------------------------------------------------------------
# artifacts


@dataclass
class RunArtifact:
    config: dict
    field: dict
    curve: dict
    quartic: dict
    aronhold: dict
    tsv: list
    delta: list
    v0: list
    tau: dict
    isogeny: dict
    anchor: dict
    jacobian: dict
    report: dict

    @property
    def valid(self):
        return bool(self.report) and all(self.report.values())

    def to_json(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["valid"] = self.valid
        return {"format": FORMAT, "version": VERSION, "artifact": d}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text):
        try:
            d = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedInput(f"not a JSON document: {exc}") from None
        if not isinstance(d, dict) or d.get("format") != FORMAT:
            raise MalformedInput("not an artifact")
        if d.get("version") != VERSION:
            raise VersionMismatch(f"artifact version {d.get('version')}, expected {VERSION}")
        a = d.get("artifact")
        try:
            art = cls(**{k: a[k] for k in cls.__dataclass_fields__})
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"missing field {exc}") from None
        if a.get("valid") != art.valid:
            raise MalformedInput("validity flag does not match the report")
        return art

    # rebuilt objects
    def field_obj(self):
        return ExtField.from_json(self.field)

    def curve_obj(self):
        return HyperCurve.from_json(self.curve)

    def map_obj(self, K=None):
        return IsogenyMap.from_json(K or self.field_obj(), self.isogeny)

    def transform(self):
        return KummerTransform.from_json(self.tau)

    def aronhold_obj(self, K=None):
        return AronholdSystem.from_json(K or self.field_obj(), self.aronhold)

    def jacobian_obj(self, K=None):
        """J_D in the stored chart, with its zero E0 ~ oo_1 + delta."""
        K = K or self.field_obj()
        Q = PlaneQuartic.from_json(K, self.quartic)
        ch = Chart(Q, [[K.from_ints(c) for c in r] for r in self.jacobian["chart"]])
        inf1 = _qdiv_load(ch, self.jacobian["inf1"])
        E0 = _qdiv_load(ch, self.jacobian["E0"])
        return QJacobian(ch, inf1, E0, random.Random(0))


def serialize(obj):
    """JSON text for an artifact or any component with ``to_json``."""
    if isinstance(obj, RunArtifact):
        return obj.dumps()
    return json.dumps({"format": FORMAT, "version": VERSION, "component": obj.to_json()},
                      sort_keys=True, separators=(",", ":"))


def load(text):
    try:
        d = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not a JSON document: {exc}") from None
    if isinstance(d, dict) and "component" in d:
        if d.get("version") != VERSION:
            raise VersionMismatch(f"version {d.get('version')}, expected {VERSION}")
        return d["component"]
    return RunArtifact.loads(text)


# ----------------------------------------------------------------------------
# DLP translation


def translate_dlp(P, Q, m_prime):
    """m with Q = m P on J_C, given the codomain answer m' (up to the sign of
    psi): m = m' if m' P = Q and m = -m' otherwise."""
    if (P * m_prime) == Q:
        return m_prime
    if (P * (-m_prime)) == Q:
        return -m_prime
    raise InconsistentDLP("neither m' nor -m' relates P and Q")


# ----------------------------------------------------------------------------
# verification of a stored artifact


def verify_artifact(art, points=10, seed=0):
    """Re-check a stored artifact without recomputing theta data: the
    recorded report, the anchor, F(P) + F(conj P) = 0 on random points and the
    DLP relation if the configuration has one."""
    K = art.field_obj()
    C = art.curve_obj()
    F = art.map_obj(K)
    J = art.jacobian_obj(K)
    rng = random.Random(seed)
    out = {"stored_report": art.valid}
    P = (K.from_ints(art.anchor["P"][0]), K.from_ints(art.anchor["P"][1]))
    R = J.from_effective(_qdiv_load(J.chart, art.anchor["R"]))
    out["anchor"] = image_class(J, F, P) == R
    ok = True
    for _ in range(points):
        x, y = C.random_point(rng)
        try:
            ok &= (image_class(J, F, (x, y)) + image_class(J, F, (x, -y))).is_zero()
        except DenominatorVanishes:
            continue
    out["conjugate"] = bool(ok)
    cfg = RunConfig.from_json(art.config)
    if cfg.dlp:
        p1, p2 = cfg.point(K, cfg.dlp["P"]), cfg.point(K, cfg.dlp["Q"])
        n = int(cfg.dlp["m"])
        try:
            out["dlp_image"] = (image_class(J, F, p1) * n - image_class(J, F, p2)).is_zero()
        except DenominatorVanishes:
            out["dlp_image"] = art.report.get("dlp_image", False)
    return out


# ----------------------------------------------------------------------------
# command line


def _parse_point(s):
    """'x,y' with ints, or a JSON pair of element encodings."""
    s = s.strip()
    if s.startswith("["):
        v = json.loads(s)
    else:
        v = [int(t) for t in s.split(",")]
    if len(v) != 2:
        raise argparse.ArgumentTypeError(f"bad point {s!r}")
    return v


def _emit(obj, out):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _config(args):
    if getattr(args, "config", None):
        cfg = RunConfig.from_json(json.loads(_read(args.config)))
    else:
        cfg = RunConfig.reference()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.precision is not None:
        cfg.precision = args.precision
    return cfg


def cmd_quotient(args):
    art, _ = run_pipeline(_config(args))
    _emit(art.dumps(), args.out)
    print("artifact valid:", art.valid, file=sys.stderr)
    return 0 if art.valid else 1


def cmd_image(args):
    art = load(_read(args.artifact))
    K = art.field_obj()
    F = art.map_obj(K)
    res = []
    for P in args.points:
        x, y = _elem(K, P[0]), _elem(K, P[1])
        try:
            cx, cy = F.cubics(x, y)
        except DenominatorVanishes:
            res.append({"point": P, "error": "denominator vanishes; use the per-point lift"})
            continue
        res.append({"point": P, "x_cubic": [K.to_ints(c) for c in cx.coeffs()],
                    "y_cubic": [K.to_ints(c) for c in cy.coeffs()]})
    _emit(res, args.out)
    return 0


def cmd_translate(args):
    art = load(_read(args.artifact))
    K = art.field_obj()
    C = art.curve_obj()
    P = C.point_divisor(_elem(K, args.P[0]), _elem(K, args.P[1]))
    Q = C.point_divisor(_elem(K, args.Q[0]), _elem(K, args.Q[1]))
    try:
        m = translate_dlp(P, Q, args.m)
    except InconsistentDLP as exc:
        _emit({"error": str(exc)}, args.out)
        return 1
    _emit({"m": m}, args.out)
    return 0


def cmd_verify(args):
    art = load(_read(args.artifact))
    out = verify_artifact(art, seed=args.seed or 0)
    if args.full:
        cfg = RunConfig.from_json(art.config)
        if args.precision is not None:
            cfg.precision = args.precision
        fresh, _ = run_pipeline(cfg)
        out["rerun_identical"] = fresh.dumps() == art.dumps()
    out["ok"] = all(out.values())
    _emit(out, args.out)
    return 0 if out["ok"] else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="g3isogeny", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--precision", type=int, default=None)
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    q = sub.add_parser("quotient", help="build the artifact for a kernel")
    q.add_argument("--config", help="run configuration (JSON); default: reference instance")
    common(q)
    q.set_defaults(fn=cmd_quotient)

    im = sub.add_parser("image", help="evaluate F at points of C")
    im.add_argument("artifact")
    im.add_argument("points", nargs="+", type=_parse_point)
    common(im)
    im.set_defaults(fn=cmd_image)

    tr = sub.add_parser("translate", help="resolve the sign of a codomain discrete log")
    tr.add_argument("artifact")
    tr.add_argument("--P", type=_parse_point, required=True)
    tr.add_argument("--Q", type=_parse_point, required=True)
    tr.add_argument("--m", type=int, required=True)
    common(tr)
    tr.set_defaults(fn=cmd_translate)

    ve = sub.add_parser("verify", help="re-check a stored artifact")
    ve.add_argument("artifact")
    ve.add_argument("--full", action="store_true", help="rerun the pipeline and compare")
    common(ve)
    ve.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.fn(args)
    except (PipelineError, MalformedInput, VersionMismatch, InvalidKernel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
