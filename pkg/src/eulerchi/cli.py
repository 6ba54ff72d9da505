"""Command-line front end ``euler``.

Exit status: 0 on success (or when a conjecture holds), 2 when a conjecture
fails, 1 when an internal invariant is violated, 3 on invalid input or a
computation refused without ``--slow-ok``.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction

import click

from .catalog import group_by_name, group_from_text
from .config import CapExceeded, InvariantViolation
from .permcore import PermutationGroup, is_prime, parse_generators, prime_divisors, subgroup_from_generators
from .posetcat import format_fraction
from .reports import Report

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONJECTURE_FAILS = 2
EXIT_USAGE = 3

# Subgroup enumeration on groups larger than this needs --slow-ok.
SLOW_ORDER = 20_000


class UsageProblem(Exception):
    pass


# ---------------------------------------------------------------------------
# group resolution
# ---------------------------------------------------------------------------


def resolve_group(group: str | None, gens: str | None, degree: int | None) -> PermutationGroup:
    if (group is None) == (gens is None):
        raise UsageProblem("give exactly one of --group and --gens")
    try:
        if group is not None:
            return group_by_name(group)
        if degree is None:
            raise UsageProblem("--gens requires --degree")
        return group_from_text(gens, degree, name=f"<{gens}>")
    except ValueError as exc:
        raise UsageProblem(str(exc)) from exc


def resolve_pair(G: PermutationGroup, action: str | None):
    """The pair (G, A); without ``--action`` A is trivial."""
    from .subgroups import GroupPair

    if action is None:
        return GroupPair.trivial_action(G)
    try:
        a_gens = parse_generators(action, G.degree)
        return GroupPair.from_generators(G.degree, G.generators, a_gens)
    except ValueError as exc:
        raise UsageProblem(f"--action: {exc}") from exc


def _need_prime(G: PermutationGroup, p: int | None, must_divide: bool = True) -> int:
    if p is None:
        raise UsageProblem("--prime is required")
    if not is_prime(p):
        raise UsageProblem(f"{p} is not prime")
    if must_divide and G.order % p:
        raise UsageProblem(f"{p} does not divide |G| = {G.order}")
    return p


def _guard(order: int, slow_ok: bool) -> None:
    if order > SLOW_ORDER and not slow_ok:
        raise UsageProblem(f"|G| = {order} exceeds {SLOW_ORDER}; rerun with --slow-ok")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def combine(name: str, reports: list[Report]) -> Report:
    out = Report(name)
    for r in reports:
        out.checks.extend(r.checks)
    first = reports[0]
    out.header, out.rows = list(first.header), [list(x) for x in first.rows]
    for r in reports[1:]:
        if r.header:
            out.rows.append([])
            out.rows.append(list(r.header))
            out.rows.extend(list(x) for x in r.rows)
    for r in reports:
        for k, v in r.values.items():
            out.values.setdefault(k, v)
    return out


def emit(report: Report, fmt: str) -> None:
    text = report.to_json() + "\n" if fmt == "json" else report.to_tsv()
    click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _with_format(f):
    """Make a command return ``(result, output format)``."""

    @functools.wraps(f)
    def wrapper(**kwargs):
        return f(**kwargs), kwargs.get("output", "tsv")

    return wrapper


def _common(f):
    f = _with_format(f)
    opts = [
        click.option("--group", "group", default=None, help="catalog name: S<n>, A<n>, C<n>, GL(n,q), SL(n,q), M11"),
        click.option("--gens", default=None, help='generators in cycle notation, e.g. "(1,2,3);(1,2)"'),
        click.option("--degree", type=int, default=None, help="degree for --gens"),
        click.option("--prime", "prime", type=int, default=None),
        click.option("--action", default=None, help="generators of an acting group A normalizing G"),
        click.option("--r", "r", type=int, default=2, show_default=True),
        click.option("--output", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True),
        click.option("--force-full-poset", is_flag=True, help="use the full poset instead of radical members"),
        click.option("--slow-ok", is_flag=True, help="allow slow computations on large groups"),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


@click.group()
def cli() -> None:
    """Euler characteristics of p-subgroup categories."""


@cli.command()
@_common
def brown(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """-chi~ of the Brown poset and the radical class weighting."""
    from .orbitstructs import brown_reduced, global_identity
    from .subgroups import enumerate_p_subgroups

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    F = enumerate_p_subgroups(G.whole(), p)
    chi = brown_reduced(G.whole(), p, F)
    rep = global_identity(G.whole(), p, F)
    if force_full_poset:
        full = F.without_trivial().poset().reduced_euler_characteristic()
        rep.equal("full poset reduced Euler characteristic", full, chi)
    rep.name = "brown"
    rep.values["group_order"] = G.order
    rep.values["minus_reduced_chi"] = -chi
    return rep


@cli.command()
@_common
def weighting(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Weighting of S_G^p by classes, with the orbit-category density identity."""
    from .orbitstructs import global_identity, orbit_category_euler
    from .subgroups import enumerate_p_subgroups

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    F = enumerate_p_subgroups(G.whole(), p)
    return combine("weighting", [global_identity(G.whole(), p, F), orbit_category_euler(G.whole(), p, F)])


def _equivariant_poset(G, p, full):
    from .equivariant import brown_equivariant_poset

    return brown_equivariant_poset(G.whole(), p, full=full)


@cli.command("chi-r")
@_common
def chi_r_cmd(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """chi_r and -chi~_r of the Brown poset under G (or under A with --action, A <= G)."""
    from .equivariant import commuting_tuple_count

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    if r < 0:
        raise UsageProblem("--r must be nonnegative")
    S = _equivariant_poset(G, p, force_full_poset)
    if action is not None:
        try:
            A = subgroup_from_generators(G, parse_generators(action, G.degree))
        except (ValueError, KeyError) as exc:
            raise UsageProblem("--action must generate a subgroup of G for chi-r") from exc
    else:
        A = G.whole()
    value = S.chi_r(A, r)
    reduced = value - Fraction(commuting_tuple_count(A, r), A.order)
    rep = Report("chi_r")
    rep.values = {"p": p, "r": r, "acting_order": A.order, "chi_r": value, "minus_reduced_chi_r": -reduced}
    if r >= 1:
        rep.check("chi_r is an integer", value.denominator, 1, "==")
    return rep


@cli.command("class-function")
@_common
def class_function(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Reduced Euler class function alpha~_r on conjugacy classes (r=1 adds the Webb identity)."""
    from .equivariant import euler_class_function, inner_product_with_conjugation_character
    from .orbitstructs import webb_identity

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    if r < 1:
        raise UsageProblem("--r must be at least 1")
    S = _equivariant_poset(G, p, force_full_poset)
    f = euler_class_function(S, G.whole(), r, reduced=True)
    total = inner_product_with_conjugation_character(f)
    rep = Report("class_function")
    rep.header = ["|x|"] + list(f.class_orders) + ["sum"]
    rep.rows = [[f"alpha~_{r}"] + list(f.values) + [total]]
    rep.values = {"p": p, "r": r, "sum": total}
    off = [v for v, o in zip(f.values, f.class_orders) if o % p == 0 and v != 0]
    rep.check("vanishes on p-singular classes", off, [], "==")
    if r == 1:
        rep = combine("class_function", [rep, webb_identity(G.whole(), p, full=force_full_poset)])
    return rep


@cli.command()
@_common
def artin(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Artin coefficients of alpha~_r over cyclic subgroup classes."""
    from .equivariant import artin_decomposition, euler_class_function

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    if r < 2:
        raise UsageProblem("--r must be at least 2 for integral Artin coefficients")
    S = _equivariant_poset(G, p, force_full_poset)
    f = euler_class_function(S, G.whole(), r, reduced=True)
    dec = artin_decomposition(f, p, degree_identity=True)
    rep = Report("artin")
    rep.header = ["|C|"] + list(dec.orders) + ["inner"]
    rep.rows = [["weight"] + list(dec.weights) + [""],
                [f"a~_{r}"] + list(dec.coefficients) + [dec.weighted_sum],
                ["|N_G(C):C|"] + list(dec.normalizer_indices) + [""]]
    rep.values = {"p": p, "r": r, "inner_product": dec.weighted_sum}
    return rep


@cli.command()
@_common
def orbitcat(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Euler characteristic of the orbit category (centralized variants with --action)."""
    from .orbitstructs import centralized_orbit_category_euler, orbit_category_euler

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    if action is None:
        return orbit_category_euler(G.whole(), p, check_quotients=True)
    pair = resolve_pair(G, action)
    reps = [centralized_orbit_category_euler(pair, p, v) for v in ("centralized", "transporter")]
    out = combine("centralized_orbit_category", reps)
    out.values = {"p": p, "chi_centralized": reps[0].values["chi"], "chi_transporter": reps[1].values["chi"]}
    return out


@cli.command()
@_common
def theorem1(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Centralized weighting identities for (G, A); with p-regular A also the ideal decomposition."""
    from .orbitstructs import ideal_decomposition, theorem1_verify

    G = resolve_group(group, gens, degree)
    p = _need_prime(G, prime)
    _guard(G.order, slow_ok)
    pair = resolve_pair(G, action)
    reps = [theorem1_verify(pair, p)]
    if pair.A.order % p:
        reps.append(ideal_decomposition(pair, p))
    return combine("theorem1", reps)


@cli.command()
@_common
def krc(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok):
    """Knörr–Robinson check along three routes, with the Alperin weight assembly."""
    from .conjectures import awc_assemble, degree_data, krc_check

    G = resolve_group(group, gens, degree)
    primes = [_need_prime(G, prime)] if prime is not None else prime_divisors(G.order)
    _guard(G.order, slow_ok)
    data = degree_data(G.name) if G.name else None
    if data is not None:
        try:
            data.validate(G.whole())
        except ValueError as exc:
            raise UsageProblem(str(exc)) from exc
    reports = []
    for p in primes:
        k = krc_check(G.whole(), p, data)
        a = awc_assemble(G.whole(), p)
        k.checks.extend(a.checks)
        k.values["awc_k_p_regular"] = a.values["k_p_regular"]
        k.values["awc_weights"] = a.values["weights"]
        k.values["awc_verdict"] = a.values["verdict"]
        reports.append(k)
    rep = reports[0] if len(reports) == 1 else combine("krc", reports)
    if len(reports) > 1:
        rep.values = {f"p{k.values['p']}": k.values for k in reports}
    rep.footer.extend(f"p={k.values['p']}\tvalue={format_fraction(k.values['value'])}\tz_p={k.values['z_p']}"
                      f"\tverdict={k.values['verdict']}\tawc={k.values['awc_verdict']}" for k in reports)
    return rep


@cli.command()
@click.option("--pi", "pi", default=None, help="comma-separated primes, e.g. 2,3")
@_common
def pi(group, gens, degree, prime, action, r, output, force_full_poset, slow_ok, pi):
    """Weighting of the poset of pi-subgroups and the HIO divisibility table."""
    from .pisubgroups import pi_context, pi_table

    G = resolve_group(group, gens, degree)
    if pi is None:
        raise UsageProblem("--pi is required")
    try:
        primes = [int(x) for x in pi.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageProblem(f"--pi: {exc}") from exc
    if not primes or not all(is_prime(q) for q in primes):
        raise UsageProblem("--pi must list primes")
    _guard(G.order, slow_ok)
    rep = pi_table(pi_context(G.whole(), primes))
    rep.footer.append(f"|G_π| = {rep.values['pi_singular']}")
    return rep


@cli.command()
@click.option("--prime", "prime", type=int, required=True)
@click.option("--nmax", type=int, default=10, show_default=True)
@click.option("--output", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True)
@_with_format
def series(prime, nmax, output):
    """Artin–Hasse counts |(S_n)_p| for n = 1..nmax, one per line."""
    from .conjectures import artin_hasse_counts

    if not is_prime(prime):
        raise UsageProblem(f"{prime} is not prime")
    if not 0 <= nmax <= 400:
        raise UsageProblem("--nmax must be between 0 and 400")
    counts = artin_hasse_counts(prime, nmax)
    if output == "json":
        return json.dumps(counts) + "\n"
    return "".join(f"{c}\n" for c in counts)


@cli.command()
@click.option("--nmax", type=int, default=12, show_default=True, help="check m = 1..nmax")
@click.option("--output", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True)
@_with_format
def identities(nmax, output):
    """Gaussian-multinomial identities for m = 1..nmax (nmax <= 12)."""
    from .conjectures import gaussian_identities

    if not 1 <= nmax <= 12:
        raise UsageProblem("--nmax must be between 1 and 12")
    reps = [gaussian_identities(m) for m in range(1, nmax + 1)]
    out = Report("gaussian_identities", checks=[c for r in reps for c in r.checks])
    out.header = ["m", "ordered_partitions", "first", "second"]
    out.rows = [[r.values["m"], r.values["ordered_partitions"], r.values["first"], r.values["second"]] for r in reps]
    out.values = {"nmax": nmax}
    return out


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _status(result) -> int:
    if isinstance(result, Report):
        verdicts = []
        if "verdict" in result.values:
            verdicts.append(result.values["verdict"])
        for v in result.values.values():
            if isinstance(v, dict) and "verdict" in v:
                verdicts.append(v["verdict"])
        if not result.passed:
            return EXIT_INVARIANT
        if "FAIL" in verdicts:
            return EXIT_CONJECTURE_FAILS
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        result = cli.main(args=args, prog_name="euler", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except UsageProblem as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except CapExceeded as exc:
        click.echo(f"error: {exc} (raise limits with EULER_CAPS or use --slow-ok)", err=True)
        return EXIT_USAGE
    except InvariantViolation as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        return EXIT_INVARIANT
    if not isinstance(result, tuple):  # --help and friends
        return EXIT_OK if result is None else int(result)
    result, fmt = result
    if isinstance(result, str):
        click.echo(result, nl=False)
        return EXIT_OK
    if isinstance(result, Report):
        emit(result, fmt)
    return _status(result)


__all__ = ["cli", "main", "resolve_group", "resolve_pair", "combine", "emit"]
