import json
import logging
from pathlib import Path

from wound_flow.cli.config import Config
from wound_flow.cohomology import che1_witness, delta_closed, delta_generic, solve_global_V
from wound_flow.errors import ParameterError
from wound_flow.function_field import Place, parse_ratfn
from wound_flow.groups import GroupKind, default_extension_kind, make_group, woundness_witness
from wound_flow.local_field import (Verdict, Window, expand, image_member, local_nontrivial_witness, v_map, w_map,
                                    wplus_map)
from wound_flow.rational_points import brute_force_points, enumerate_points, pole_bounds
from wound_flow.tamagawa import counterexample_report, tamagawa_number
from wound_flow.twist_engine import (TwistCertificate, certificate_verify, first_places, places_needed,
                                     twist_search)

# every command returns (payload, text lines, exit code)
CommandResult = tuple[dict, list[str], int]


def _window(args) -> Window | None:
    low, high = getattr(args, "window_low", None), getattr(args, "window_high", None)
    if low is None and high is None:
        return None
    if low is None or high is None:
        raise ParameterError("Give both --window-low and --window-high, or neither.")
    return Window(low, high)


def _extension_kind(config: Config, kind: str | None) -> GroupKind:
    return GroupKind.parse(kind) if kind else default_extension_kind(config.field)


def _places(config: Config, text: str) -> list[Place]:
    return [Place.parse(config.field, t) for t in text.split(",") if t.strip()]


#----------#
# commands #
#----------#

def cmd_tamagawa(args, config: Config) -> CommandResult:
    spec = make_group(GroupKind.W, config.field, config.parameter)
    report = tamagawa_number(spec, threads=config.threads)
    payload = report.to_dict()
    payload["woundness"] = woundness_witness(spec)
    lines = [f"group: {spec}",
             f"tau: {report.tau_text}",
             f"N: {report.N}",
             f"l: {report.l}",
             f"#W(k): {report.point_count}",
             f"b: {report.b}"]
    lines += [f"  l-place {row.place}: residue {row.residue}, counted {row.verdict}" for row in report.l_places]
    if args.counterexample:
        extension = spec.with_kind(_extension_kind(config, None))
        counter = counterexample_report(extension, tau_w=report.tau, threads=config.threads)
        payload["counterexample"] = counter.to_dict()
        lines.append(f"counterexample: {counter.statement}")
    return payload, lines, 0


def cmd_points(args, config: Config) -> CommandResult:
    spec = make_group(args.kind, config.field, config.parameter)
    if args.brute_force:
        points = brute_force_points(spec, config.height, threads=config.threads)
        method = f"height <= {config.height}"
        extra = {}
    else:
        points = enumerate_points(spec, threads=config.threads)
        method = "pole bound"
        extra = {"poleBound": pole_bounds(spec).to_dict()}
    payload = {"group": spec.to_dict(), "method": method, "count": len(points),
               "points": [[str(c) for c in pt.coords] for pt in points], **extra}
    lines = [f"group: {spec}", f"method: {method}", f"count: {len(points)}"] + [f"  {pt}" for pt in points]
    return payload, lines, 0


def cmd_delta(args, config: Config) -> CommandResult:
    spec = make_group(_extension_kind(config, args.kind), config.field, config.parameter)
    field = config.field
    beta = parse_ratfn(field, args.beta)
    point = (parse_ratfn(field, args.c), parse_ratfn(field, args.d))
    rep = delta_closed(spec, beta, point)
    payload = {"group": spec.to_dict(), "beta": str(beta), "point": [str(t) for t in point], "class": rep.to_dict()}
    lines = [str(rep.rep)]
    code = 0
    if args.generic:
        value = delta_generic(spec, beta, point)
        agree = value == rep.rep
        payload["generic"] = {"value": str(value), "agree": agree}
        lines.append(f"generic: {value} ({'agrees' if agree else 'DIFFERS'})")
        code = 0 if agree else 1
    return payload, lines, code


def cmd_local_image(args, config: Config) -> CommandResult:
    field = config.field
    a = config.parameter
    g = {"f": v_map, "g": w_map, "gplus": wplus_map}[args.map](a)
    place = Place.parse(field, args.place)
    window = _window(args)
    if args.lam is None:
        lam = local_nontrivial_witness(g, place, window)
    else:
        lam = expand(parse_ratfn(field, args.lam), place, config.precision)
    decision = image_member(g, lam, window)
    payload = {"map": str(g), "place": str(place), "lambda": lam.to_dict(), "decision": decision.to_dict()}
    lines = [f"map: {g}", f"place: {place}", f"lambda: {lam}", f"verdict: {decision.verdict.value}",
             f"window: [{decision.window.low}, {decision.window.high}]"]
    if decision.reason:
        lines.append(f"reason: {decision.reason}")
    if decision.witness is not None:
        lines += [f"x: {decision.witness[0]}", f"y: {decision.witness[1]}"]
    return payload, lines, 1 if decision.verdict == Verdict.INCONCLUSIVE else 0


def cmd_local_witness(args, config: Config) -> CommandResult:
    kind = GroupKind.WPLUS if args.plus else GroupKind.W
    spec = make_group(kind, config.field, config.parameter)
    witness = che1_witness(spec, Place.parse(config.field, args.place), _window(args), height=config.height)
    lines = [f"group: {spec}", f"place: {witness.place}", f"class: {witness.lam}",
             f"verdict: {witness.decision.verdict.value}",
             f"global lifts up to height {witness.height}: {len(witness.global_lifts)} of {witness.candidates}"]
    return witness.to_dict(), lines, 0


def cmd_solve_v(args, config: Config) -> CommandResult:
    spec = make_group(GroupKind.V, config.field, config.parameter)
    lam = parse_ratfn(config.field, args.lam)
    result = solve_global_V(spec, lam, window=_window(args), prec=config.precision)
    payload = {"group": spec.to_dict(), "lambda": str(lam), **result.to_dict()}
    if result.ok:
        lines = [f"x: {result.solution[0]}", f"y: {result.solution[1]}"]
    else:
        lines = [f"stalled at {result.stalled_at}: {result.reason}"]
    return payload, lines, 0 if result.ok else 1


def cmd_twist_search(args, config: Config) -> CommandResult:
    spec = make_group(_extension_kind(config, args.kind), config.field, config.parameter)
    point_count = None
    if args.places:
        places = _places(config, args.places)
    elif args.epsilon is not None:
        point_count = len(enumerate_points(spec.with_kind(GroupKind.V), threads=config.threads))
        places = first_places(spec, places_needed(point_count, spec.p, args.epsilon))
    else:
        raise ParameterError("Give the places with --places or a target with --epsilon.")
    cert = twist_search(spec, places, _window(args), prec=config.precision, point_count=point_count,
                        threads=config.threads)
    payload = cert.to_dict()
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        logging.info(f"Certificate written to {path}.")
    lines = [f"group: {spec}", f"S: {', '.join(str(v) for v in cert.places)}", f"beta: {cert.beta}",
             f"#V(k): {cert.point_count}", f"bound: {cert.bound.numerator}/{cert.bound.denominator}"]
    lines += [f"  {o.place}: mu = {o.mu}, coset {o.coset}" for o in cert.per_place]
    return payload, lines, 0


def cmd_verify(args, config: Config) -> CommandResult:
    try:
        data = json.loads(Path(args.file).read_text(encoding="utf-8"))
        cert = TwistCertificate.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise ParameterError(f"Cannot read certificate {args.file}: {e}") from e
    report = certificate_verify(cert)
    lines = [f"{'PASS' if report.ok else 'FAIL'}: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks"]
    lines += [f"  {c.name} at {c.place}: {c.detail}" for c in report.failures]
    return report.to_dict(), lines, 0 if report.ok else 1


COMMANDS = {
    "tamagawa": cmd_tamagawa,
    "points": cmd_points,
    "delta": cmd_delta,
    "local-image": cmd_local_image,
    "local-witness": cmd_local_witness,
    "solve-v": cmd_solve_v,
    "twist-search": cmd_twist_search,
    "verify": cmd_verify,
}
