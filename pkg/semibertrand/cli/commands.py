"""Pipelines behind each CLI command.

Every handler takes the parsed input and the job configuration and returns a
:class:`ReportBundle`; rejections that are results rather than errors come
back with ``rejected=True``.
"""
import logging
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from semibertrand.core.config import settings
from semibertrand.core.exceptions import InputError
from semibertrand.dsl.jets import evaluate
from semibertrand.models.bertrand import BertrandCertificate
from semibertrand.models.curve import CurveSpec, FrenetApparatus
from semibertrand.models.metric import E1_2
from semibertrand.schemas.input_file import JobInput
from semibertrand.schemas.job import Command, JobConfig
from semibertrand.services.bertrand_service import (
    construct_mate,
    estimate_13_constants,
    identity_residuals,
    mate_apparatus_closed_form,
    verify_mate,
)
from semibertrand.services.classical_service import (
    classical_obstruction_scan,
    classical_offset_mate,
    fit_classical_relation,
    planar_parallel_mate,
)
from semibertrand.services.frenet_service import (
    arclength,
    causal_profile,
    frenet_apparatus,
    node_apparatus,
    speed_and_character,
)
from semibertrand.services.reporting_service import (
    ReportBundle,
    Table,
    apparatus_table,
    curve_table,
    trajectory_table,
)
from semibertrand.services.synthesis_service import integrate_frenet_system, synthesize
from semibertrand.utils.constants import CURVATURE_NAMES

logger = logging.getLogger(__name__)

Handler = Callable[[JobInput, JobConfig], ReportBundle]


def source_curve(job: JobInput, config: JobConfig) -> CurveSpec:
    """The input curve; a ``[curvatures]`` section is synthesized first."""
    if job.curve is not None:
        return job.curve
    logger.info(f"synthesizing the prescribed {job.prescription.metric} curve")
    return synthesize(job.prescription, config.step)


def _certify(job: JobInput, config: JobConfig) -> Tuple[CurveSpec, BertrandCertificate]:
    c = source_curve(job, config)
    app = frenet_apparatus(c, grid_size=config.grid)
    cert = estimate_13_constants(
        app,
        gamma_hint=config.gamma_hint,
        alpha_hint=config.alpha_hint,
        tol_eq=config.tol_eq,
        tol_margin=config.tol_margin,
    )
    if cert.accepted:
        logger.info(f"certificate accepted: alpha={cert.alpha:.6g} beta={cert.beta:.6g} gamma={cert.gamma:.6g}")
    else:
        logger.info(f"not a (1,3)-Bertrand curve: condition {cert.failed_condition} fails")
    return c, cert


def _rejected(cert: BertrandCertificate) -> ReportBundle:
    return ReportBundle(summary=cert.report(), rejected=True)


def classify(job: JobInput, config: JobConfig) -> ReportBundle:
    c = source_curve(job, config)
    profile = causal_profile(c)
    speed, character = speed_and_character(c, c.domain[0])
    summary = {
        "space": c.metric.tag,
        "mode": c.mode,
        "character": profile.character,
        "first_violation": profile.first_violation,
        "first_violation_character": profile.first_violation_character,
        "speed_at_start": speed,
        "character_at_start": character,
    }
    summary.update({f"count_{name}": n for name, n in profile.counts.items()})
    if profile.first_violation is None:
        summary["arclength"] = float(arclength(c, c.domain[1])[0])
    return ReportBundle(summary=summary)


def frenet(job: JobInput, config: JobConfig) -> ReportBundle:
    c = source_curve(job, config)
    app = frenet_apparatus(c, grid_size=config.grid)
    summary = {
        "space": c.metric.tag,
        "mode": c.mode,
        "samples": len(app),
        "s_start": app.s[0],
        "s_end": app.s[-1],
        "gram_residual": app.gram_residual(),
        "orientation_flipped": app.orientation_flipped,
    }
    for name, k in zip(CURVATURE_NAMES, app.curvatures().T):
        summary[f"{name}_min"] = k.min()
        summary[f"{name}_max"] = k.max()
    return ReportBundle(summary=summary, tables={"frenet": apparatus_table(app)})


def synth(job: JobInput, config: JobConfig) -> ReportBundle:
    if job.prescription is None:
        raise InputError("synth needs a [curvatures] section", error_code="MISSING_SECTION")
    p = job.prescription
    trajectory = integrate_frenet_system(p, config.step)
    app = frenet_apparatus(trajectory.to_curve(), grid_size=config.grid)
    prescribed = np.stack(
        [np.broadcast_to(evaluate(e, app.parameters), app.parameters.shape) for e in p.curvature_exprs], axis=1
    )
    summary = {
        "space": p.metric.tag,
        "steps": len(trajectory.s) - 1,
        "step": trajectory.step,
        "max_gram_residual": trajectory.gram_residuals.max(),
        "curvature_roundtrip": np.max(np.abs(app.curvatures() - prescribed)),
    }
    return ReportBundle(summary=summary, tables={"synth": trajectory_table(trajectory)})


def fit_classical(job: JobInput, config: JobConfig) -> ReportBundle:
    c = source_curve(job, config)
    if c.metric == E1_2:
        if job.offset_alpha is None:
            raise InputError("plane curves need an [offset] section with alpha", error_code="MISSING_SECTION")
        mate = planar_parallel_mate(c, job.offset_alpha, config.step)
        summary = {
            "space": c.metric.tag,
            "alpha": mate.alpha,
            "normal_line_residual": mate.residual,
            "min_speed": mate.min_speed,
        }
        return ReportBundle(summary=summary, tables={"mate": curve_table(mate.curve)})

    app = frenet_apparatus(c, grid_size=config.grid)
    fit = fit_classical_relation(app, tol=settings.CLASSICAL_FIT_TOL, margin=config.tol_margin)
    if fit is None:
        summary = {
            "space": c.metric.tag,
            "accepted": False,
            "failed_condition": "classical_relation",
            "reason": "no nonzero constants a, b satisfy a k1 + b k2 = 1",
        }
        return ReportBundle(summary=summary, rejected=True)
    alpha = fit.a if job.offset_alpha is None else job.offset_alpha
    mate = classical_offset_mate(c, alpha, config.step)
    summary = {
        "space": c.metric.tag,
        "accepted": True,
        "a": fit.a,
        "b": fit.b,
        "fit_residual": fit.residual,
        "family_flag": fit.family_flag,
        "alpha": alpha,
        "normal_line_residual": mate.residual,
        "min_speed": mate.min_speed,
    }
    return ReportBundle(summary=summary, tables={"mate": curve_table(mate.curve)})


def scan_classical(job: JobInput, config: JobConfig) -> ReportBundle:
    c = source_curve(job, config)
    app = frenet_apparatus(c, grid_size=config.grid)
    scan = classical_obstruction_scan(app, job.alphas)
    rows = [
        (
            e.alpha,
            e.value,
            float(e.feasible),
            e.theta.c if e.theta is not None else np.nan,
            e.theta.sigma if e.theta is not None else np.nan,
        )
        for e in scan.entries
    ]
    at_zero = [e.value for e in scan.entries if e.alpha == 0.0]
    summary = {
        "space": c.metric.tag,
        "offsets": len(scan),
        "infeasible": sum(not e.feasible for e in scan.entries),
        "min_nonzero_alpha_value": scan.min_nonzero_alpha_value(),
        "value_at_zero": at_zero[0] if at_zero else None,
    }
    table = Table(columns=["alpha", "value", "feasible", "theta_c", "theta_sigma"], rows=rows)
    return ReportBundle(summary=summary, tables={"scan": table})


def bertrand_check(job: JobInput, config: JobConfig) -> ReportBundle:
    _, cert = _certify(job, config)
    return ReportBundle(summary=cert.report(), rejected=not cert.accepted)


def _closed_form_table(nodes: FrenetApparatus, cert: BertrandCertificate) -> Tuple[Table, Dict[str, float]]:
    closed = mate_apparatus_closed_form(nodes, cert)
    columns = ["s", "phi_prime", "kbar1", "kbar2", "kbar3", "rot_c", "rot_s"]
    rows = np.column_stack([getattr(closed, name) for name in columns])
    summary: Dict[str, float] = {
        "mate_arclength": float(CubicSpline(closed.s, closed.phi_prime).integrate(closed.s[0], closed.s[-1])),
        "rot_c": float(np.mean(closed.rot_c)),
        "rot_s": float(np.mean(closed.rot_s)),
        "trace_q_over_p": float(np.max(closed.trace.Q / closed.trace.P)),
    }
    for name in ("a", "b", "p", "q"):
        summary[f"trace_residual_{name}"] = getattr(closed.trace, f"residual_{name}")
    for name in ("phi_prime", "kbar1", "kbar2", "kbar3"):
        values = getattr(closed, name)
        summary[f"{name}_min"] = float(values.min())
        summary[f"{name}_max"] = float(values.max())
    for name, pair in closed.angles.model_dump().items():
        if pair is not None:
            summary[f"{name}_c"] = pair["c"]
            summary[f"{name}_sigma"] = pair["sigma"]
    return Table(columns=columns, rows=rows), summary


def bertrand_mate(job: JobInput, config: JobConfig) -> ReportBundle:
    c, cert = _certify(job, config)
    if not cert.accepted:
        return _rejected(cert)
    nodes = node_apparatus(c, config.step)
    mate = construct_mate(c, cert, app=nodes)
    table, closed = _closed_form_table(nodes, cert)
    summary = {**cert.report(), **closed, **identity_residuals(nodes, cert).model_dump()}
    return ReportBundle(summary=summary, tables={"mate": curve_table(mate), "mate_apparatus": table})


def bertrand_verify(job: JobInput, config: JobConfig) -> ReportBundle:
    c, cert = _certify(job, config)
    if not cert.accepted:
        return _rejected(cert)
    nodes = node_apparatus(c, config.step)
    mate = construct_mate(c, cert, app=nodes)
    report = verify_mate(c, mate, cert, grid_size=config.grid)
    return ReportBundle(summary={**cert.report(), **report.report()})


COMMANDS: Dict[Command, Handler] = {
    Command.CLASSIFY: classify,
    Command.FRENET: frenet,
    Command.SYNTH: synth,
    Command.FIT_CLASSICAL: fit_classical,
    Command.SCAN_CLASSICAL: scan_classical,
    Command.BERTRAND_CHECK: bertrand_check,
    Command.BERTRAND_MATE: bertrand_mate,
    Command.BERTRAND_VERIFY: bertrand_verify,
}
