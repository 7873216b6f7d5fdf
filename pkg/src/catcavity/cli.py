"""Command-line harness: figure CSVs, validation suites, raw oracle dumps.

Figures are emitted as plain CSV (comma separated, `.` decimal) with a header
row preceded by one `#` metadata comment recording every parameter and the
package version, so any file can be traced back to its configuration.  The
thermal occupation has no physically blessed default and must be supplied
per run, on the command line or in a config file.
"""

import argparse
import configparser
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import oracle
from .damping import DampingParams
from .dressed import build_dressed_frame
from .errors import ConfigurationError
from .observables import ExperimentConfig, eta_correlation, p_excited, p_joint
from .presets import PRESETS
from .states import CatSpec, coherent_distribution, default_truncation
from .validation import fast_checks, full_checks

try:
    VERSION = version("catcavity")
except PackageNotFoundError:
    VERSION = "0.dev"

FIGURE_DEFAULTS = {
    "fig1": {"preset": "benson97", "nbar": 49.0, "gt_max": 50.0},
    "fig2": {"preset": "brune96", "nbar": 3.3, "gt_max": 25.0},
    "fig3": {"preset": None, "nbar": None, "gt_max": 50.0},
}


def _load_config_section(path, section):
    """Read flat key = value overrides for one section of a config file."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigurationError(f"config file not found: {path}")
    if section not in parser:
        return {}
    return dict(parser[section])


def _merge_settings(args, figure_id):
    """Defaults, then config-file section, then explicit CLI flags."""
    settings = {"phi": 0.0, "gt_step": 0.1, "nb": None, "out": ".",
                "si_times": False}
    settings.update(FIGURE_DEFAULTS[figure_id])
    if args.config:
        raw = _load_config_section(args.config, figure_id)
        for key in ("preset", "out"):
            if key in raw:
                settings[key] = raw[key]
        for key in ("nbar", "phi", "nb", "gt_max", "gt_step"):
            if key in raw:
                settings[key] = float(raw[key])
    for key in ("preset", "nbar", "phi", "nb", "gt_max", "gt_step", "out"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if args.si_times:
        settings["si_times"] = True
    if settings["nb"] is None:
        raise ConfigurationError(
            "thermal occupation nb is required and has no default: the "
            "published operating points do not pin it down, so pass --nb "
            "(0 for zero temperature, e.g. 0.1 for a cold microwave cavity) "
            "or set nb in the config file"
        )
    return settings


def _metadata_line(figure_id, preset, settings, extra=""):
    parts = [
        f"figure={figure_id}",
        f"preset={preset.name}",
        f"kappa={preset.kappa:g}",
        f"g={preset.g:g}",
        f"nbar={settings['nbar']:g}",
        f"phi={settings['phi']:g}",
        f"nb={settings['nb']:g}",
        f"gt_max={settings['gt_max']:g}",
        f"gt_step={settings['gt_step']:g}",
        f"version={VERSION}",
    ]
    if extra:
        parts.append(extra)
    return "# " + " ".join(parts)


def _fmt(value):
    """Empty cell for undefined entries, repr-exact float otherwise."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(value, ".12g")


def _write_csv(path, metadata, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(metadata + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _time_axis(settings, preset):
    gts = np.arange(0.0, settings["gt_max"] + 0.5 * settings["gt_step"],
                    settings["gt_step"])
    return gts, gts / preset.g


def _revival_rows(config, preset, settings):
    gts, times = _time_axis(settings, preset)
    rows = []
    for gt, t in zip(gts, times):
        axis = t if settings["si_times"] else gt
        pp = p_excited(config, t)
        ppp = p_joint(config, t, 2.0 * t, "+", "+")
        rows.append((float(axis), float(pp), float(ppp)))
    return rows


def _revival_figure(figure_id, settings, out_dir):
    preset = PRESETS[settings["preset"]]
    damping = DampingParams(kappa=preset.kappa, n_thermal=settings["nb"])
    nbar = settings["nbar"]
    written = []
    axis_name = "t" if settings["si_times"] else "gt"
    for tag, fieldspec in (
        ("coherent",
         coherent_distribution(nbar, default_truncation(nbar))),
        ("cat", CatSpec(intensity=nbar, phase=settings["phi"])),
    ):
        config = ExperimentConfig(jc=preset.jc(), damping=damping,
                                  initial_field=fieldspec)
        rows = _revival_rows(config, preset, settings)
        path = out_dir / f"{figure_id}_{tag}.csv"
        meta = _metadata_line(figure_id, preset, settings, extra=f"field={tag}")
        _write_csv(path, meta, (axis_name, "P_plus", "P_plusplus"), rows)
        written.append(path)
    return written


def _eta_figure(settings, out_dir):
    written = []
    axis_name = "t" if settings["si_times"] else "gt"
    for preset_name in ("benson97", "brune96"):
        preset = PRESETS[preset_name]
        local = dict(settings)
        local["preset"] = preset_name
        if settings["nbar"] is None:
            local["nbar"] = preset.nbar
        if preset_name == "brune96" and settings["nbar"] is None:
            local["gt_max"] = 25.0
        damping = DampingParams(kappa=preset.kappa, n_thermal=local["nb"])
        nbar = local["nbar"]
        configs = {
            "coherent": ExperimentConfig(
                jc=preset.jc(), damping=damping,
                initial_field=coherent_distribution(
                    nbar, default_truncation(nbar))),
            "cat": ExperimentConfig(
                jc=preset.jc(), damping=damping,
                initial_field=CatSpec(intensity=nbar, phase=local["phi"])),
        }
        gts, times = _time_axis(local, preset)
        rows = []
        for gt, t in zip(gts, times):
            axis = t if local["si_times"] else gt
            rows.append((
                float(axis),
                eta_correlation(configs["coherent"], t),
                eta_correlation(configs["cat"], t),
            ))
        path = out_dir / f"fig3_{preset_name}.csv"
        meta = _metadata_line("fig3", preset, local)
        _write_csv(path, meta, (axis_name, "eta_coherent", "eta_cat"), rows)
        written.append(path)
    return written


def run_figure(figure_id, args):
    settings = _merge_settings(args, figure_id)
    out_dir = Path(settings["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    if figure_id in ("fig1", "fig2"):
        return _revival_figure(figure_id, settings, out_dir)
    return _eta_figure(settings, out_dir)


def run_validate(level):
    results = full_checks() if level == "full" else fast_checks()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed ({level} suite)")
    return 1 if failed else 0


def run_oracle(args):
    """Integrate the master equation and dump observables in long format."""
    if args.nb is None:
        raise ConfigurationError(
            "thermal occupation nb is required and has no default; pass --nb"
        )
    preset = PRESETS[args.preset]
    nbar = args.nbar if args.nbar is not None else 4.0
    trunc = default_truncation(nbar)
    if trunc > 50:
        print(f"warning: truncation {trunc} gives a "
              f"{2 * (trunc + 1)}-dimensional state; this will be slow",
              file=sys.stderr)
    t_max = args.t_max if args.t_max is not None else 0.5 / preset.kappa
    damping = DampingParams(kappa=preset.kappa, n_thermal=args.nb)
    rho0 = oracle.build_initial_state(CatSpec(intensity=nbar, phase=args.phi),
                                      trunc)
    times = np.linspace(0.0, t_max, args.samples)
    traj = oracle.integrate_trajectory(rho0, preset.jc(), damping, times)
    frame = build_dressed_frame(preset.jc(), trunc)
    obs = oracle.oracle_observables(traj, frame)

    out_dir = Path(args.out if args.out is not None else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "oracle.csv"
    rows = []
    for i, t in enumerate(obs.times):
        rows.append((float(t), "p_plus", float(obs.p_plus[i])))
        rows.append((float(t), "f_ground", float(obs.f_ground[i])))
        for n in range(trunc):
            rows.append((float(t), f"f_{n}", float(obs.f[i, n])))
    meta = (f"# preset={preset.name} kappa={preset.kappa:g} g={preset.g:g} "
            f"nbar={nbar:g} phi={args.phi:g} nb={args.nb:g} t_max={t_max:g} "
            f"samples={args.samples} version={VERSION}")
    _write_csv(path, meta, ("t", "observable", "value"), rows)
    return [path]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="catcavity",
        description="Atom revival, correlation and decoherence curves for a "
                    "damped cavity field",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write figure data as CSV")
    fig.add_argument("id", choices=("fig1", "fig2", "fig3"))
    fig.add_argument("--preset", choices=sorted(PRESETS), default=None)
    fig.add_argument("--nbar", type=float, default=None,
                     help="mean photon number of the injected field")
    fig.add_argument("--phi", type=float, default=None,
                     help="cat superposition phase (0 = even cat)")
    fig.add_argument("--nb", type=float, default=None,
                     help="thermal occupation of the cavity environment "
                          "(required, no default)")
    fig.add_argument("--gt-max", dest="gt_max", type=float, default=None)
    fig.add_argument("--gt-step", dest="gt_step", type=float, default=None)
    fig.add_argument("--out", default=None, help="output directory")
    fig.add_argument("--si-times", action="store_true",
                     help="emit times in seconds instead of dimensionless gt")
    fig.add_argument("--config", default=None,
                     help="INI-style config file with a section per figure")

    val = sub.add_parser("validate", help="run the self-check suite")
    val.add_argument("--level", choices=("fast", "full"), default="fast")

    orc = sub.add_parser("oracle", help="dump raw master-equation observables")
    orc.add_argument("--preset", choices=sorted(PRESETS), default="benson97")
    orc.add_argument("--nbar", type=float, default=None)
    orc.add_argument("--phi", type=float, default=0.0)
    orc.add_argument("--nb", type=float, default=None)
    orc.add_argument("--t-max", dest="t_max", type=float, default=None,
                     help="final time in seconds")
    orc.add_argument("--samples", type=int, default=21)
    orc.add_argument("--out", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            written = run_figure(args.id, args)
            for path in written:
                print(path)
            return 0
        if args.command == "validate":
            return run_validate(args.level)
        written = run_oracle(args)
        for path in written:
            print(path)
        return 0
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
