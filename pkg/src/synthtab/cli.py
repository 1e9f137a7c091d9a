"""Command-line interface: profile, prompt, generate, evaluate, export-plots.

Every command writes its artifacts plus a manifest (inputs, flags, content
hashes) into a run-scoped output directory. All state lives on disk; with
the local backend and a fixed seed the whole pipeline is byte-reproducible.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import llm as llm_mod
from .data import load_csv, load_schema, write_csv
from .errors import SynthtabError
from .metrics import evaluate_datasets, row_overlap
from .profiling import load_profile, profile, round_profile, save_profile
from .prompting import (
    INLINE_CSV,
    SPREADSHEET_FILE,
    GenerationSpec,
    NameMap,
    build_prompt,
    derive_restrictions,
    is_obfuscated,
    obfuscate,
)
from .report import export_plot_data, render_markdown, save_report, write_manifest
from .sampling import local_sample


def _fail(exc: Exception) -> None:
    if isinstance(exc, SynthtabError):
        code = exc.code
    elif isinstance(exc, OSError):
        code = "io-error"
    else:
        code = "invalid-argument"
    click.echo(f"error[{code}]: {exc}", err=True)
    sys.exit(1)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SynthtabError, ValueError, OSError) as exc:
            _fail(exc)

    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(),
              default=None, help="JSON config file with default options.")
@click.option("--seed", type=int, default=None,
              help="Default seed for commands that sample.")
@click.pass_context
def main(ctx, config_path, seed):
    """Profile real tables, build prompts, generate synthetic tables, and
    score them."""
    config = {}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, ValueError) as exc:
            _fail(exc)
    ctx.obj = {"config": config, "seed": seed}


def _cfg(ctx, section: str, key: str, flag_value, default):
    if flag_value is not None:
        return flag_value
    return ctx.obj["config"].get(section, {}).get(key, default)


def _spec_from_options(ctx, n_rows, decimals, corr_threshold, include_all,
                       output_format, restrictions) -> GenerationSpec:
    return GenerationSpec(
        n_rows=n_rows,
        decimals=_cfg(ctx, "generation", "decimals", decimals, 3),
        corr_threshold=_cfg(ctx, "generation", "corr_threshold",
                            corr_threshold, 0.20),
        include_all_correlations=_cfg(
            ctx, "generation", "include_all_correlations",
            include_all or None, False),
        output_format=_cfg(ctx, "generation", "output_format",
                           output_format, SPREADSHEET_FILE),
        restrictions=restrictions,
    )


@main.command("profile")
@click.argument("real_csv", type=click.Path(path_type=Path))
@click.option("--schema", "schema_path", required=True,
              type=click.Path(path_type=Path))
@click.option("-o", "--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--drop-incomplete", is_flag=True,
              help="Drop rows with missing cells instead of failing.")
@click.option("--decimals", type=int, default=None)
@click.pass_context
@handle_errors
def cmd_profile(ctx, real_csv, schema_path, out_dir, drop_incomplete, decimals):
    """Profile a real CSV: statistics, correlations, prompt-ready variant."""
    schema = load_schema(schema_path)
    ds = load_csv(real_csv, schema, drop_incomplete=drop_incomplete)
    prof = profile(ds)
    out_dir.mkdir(parents=True, exist_ok=True)

    save_profile(prof, out_dir / "profile.json")
    d = _cfg(ctx, "generation", "decimals", decimals, 3)
    rounded, name_map = obfuscate(round_profile(prof, d))
    save_profile(rounded, out_dir / "profile_prompt.json")
    name_map.save(out_dir / "namemap.json")

    write_manifest(
        out_dir, "profile",
        inputs=[real_csv, schema_path],
        flags={"drop_incomplete": drop_incomplete, "decimals": d},
        outputs=[out_dir / "profile.json", out_dir / "profile_prompt.json",
                 out_dir / "namemap.json"],
    )
    for w in prof.warnings:
        click.echo(f"warning: {w}", err=True)
    click.echo(f"profiled {ds.n_rows} rows, {len(schema)} columns "
               f"-> {out_dir / 'profile.json'}")


def _prepare_prompt_inputs(ctx, profile_path, schema_path, decimals):
    """Load a profile and make it prompt-ready (rounded, obfuscated)."""
    prof = load_profile(profile_path)
    d = _cfg(ctx, "generation", "decimals", decimals, 3)
    restrictions = dict(ctx.obj["config"].get("generation", {})
                        .get("restrictions", {}))
    name_map = None
    if is_obfuscated(prof):
        return prof, name_map, restrictions, d
    prof = round_profile(prof, d)
    prof, name_map = obfuscate(prof)
    if schema_path is not None:
        schema = load_schema(schema_path)
        derived = derive_restrictions(schema)
        derived.update(restrictions)
        restrictions = derived
    return prof, name_map, restrictions, d


@main.command("prompt")
@click.argument("profile_json", type=click.Path(path_type=Path))
@click.option("-o", "--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--n-rows", type=int, default=None,
              help="Target sample size (default: the profiled row count).")
@click.option("--schema", "schema_path", default=None,
              type=click.Path(path_type=Path),
              help="Schema file; hard bounds become prompt restrictions.")
@click.option("--decimals", type=int, default=None)
@click.option("--corr-threshold", type=float, default=None)
@click.option("--include-all-correlations", is_flag=True, default=False)
@click.option("--output-format",
              type=click.Choice([SPREADSHEET_FILE, INLINE_CSV]), default=None)
@click.option("--template", "template_path", default=None,
              type=click.Path(path_type=Path),
              help="Custom prompt template with named placeholders.")
@click.pass_context
@handle_errors
def cmd_prompt(ctx, profile_json, out_dir, n_rows, schema_path, decimals,
               corr_threshold, include_all_correlations, output_format,
               template_path):
    """Build the deterministic generation prompt from a saved profile."""
    prof, name_map, restrictions, d = _prepare_prompt_inputs(
        ctx, profile_json, schema_path, decimals)
    spec = _spec_from_options(
        ctx, n_rows or prof.n_rows, d, corr_threshold,
        include_all_correlations, output_format, restrictions)
    template_path = _cfg(ctx, "generation", "template", template_path, None)
    template = (Path(template_path).read_text(encoding="utf-8")
                if template_path else None)
    text = build_prompt(prof, spec, name_map=name_map, template=template)

    out_dir.mkdir(parents=True, exist_ok=True)
    prompt_path = out_dir / "prompt.txt"
    prompt_path.write_text(text, encoding="utf-8")
    inputs = [profile_json] + ([schema_path] if schema_path else []) \
        + ([template_path] if template_path else [])
    write_manifest(
        out_dir, "prompt",
        inputs=inputs,
        flags={"n_rows": spec.n_rows, "decimals": spec.decimals,
               "corr_threshold": spec.corr_threshold,
               "include_all_correlations": spec.include_all_correlations,
               "output_format": spec.output_format},
        outputs=[prompt_path],
    )
    click.echo(f"wrote {prompt_path}")


def _llm_config(ctx, endpoint, model, api_key_env, timeout, max_retries,
                temperature) -> llm_mod.LlmConfig:
    endpoint = _cfg(ctx, "llm", "endpoint", endpoint, None)
    model = _cfg(ctx, "llm", "model", model, None)
    if not endpoint or not model:
        raise ValueError("llm backend requires --endpoint and --model "
                         "(flags or config)")
    return llm_mod.LlmConfig(
        endpoint=endpoint,
        model=model,
        api_key_env=_cfg(ctx, "llm", "api_key_env", api_key_env, "LLM_API_KEY"),
        timeout=_cfg(ctx, "llm", "timeout", timeout, 120.0),
        max_retries=_cfg(ctx, "llm", "max_retries", max_retries, 2),
        temperature=_cfg(ctx, "llm", "temperature", temperature, None),
        stateless=True,
    )


@main.command("generate")
@click.option("--backend", type=click.Choice(["local", "llm"]), required=True)
@click.option("--profile", "profile_path", required=True,
              type=click.Path(path_type=Path))
@click.option("--schema", "schema_path", required=True,
              type=click.Path(path_type=Path))
@click.option("-n", "--n-rows", type=int, default=None)
@click.option("--seed", type=int, default=None,
              help="Required for the local backend.")
@click.option("-o", "--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--trials", type=int, default=1,
              help="Generate this many independent datasets.")
@click.option("--tol-rel", type=float, default=None,
              help="Row-match tolerance for the cross-trial overlap report.")
@click.option("--prompt-file", default=None,
              type=click.Path(path_type=Path),
              help="Use this prompt text instead of building one (llm).")
@click.option("--endpoint", default=None)
@click.option("--model", default=None)
@click.option("--api-key-env", default=None)
@click.option("--timeout", type=float, default=None)
@click.option("--max-retries", type=int, default=None)
@click.option("--temperature", type=float, default=None)
@click.option("--decimals", type=int, default=None)
@click.option("--corr-threshold", type=float, default=None)
@click.option("--include-all-correlations", is_flag=True, default=False)
@click.pass_context
@handle_errors
def cmd_generate(ctx, backend, profile_path, schema_path, n_rows, seed,
                 out_dir, trials, tol_rel, prompt_file, endpoint, model,
                 api_key_env, timeout, max_retries, temperature, decimals,
                 corr_threshold, include_all_correlations):
    """Produce synthetic CSV(s) from a profile, locally or via an LLM."""
    if trials < 1:
        raise ValueError("--trials must be >= 1")
    schema = load_schema(schema_path)
    prof = load_profile(profile_path)
    n = n_rows or prof.n_rows
    out_dir.mkdir(parents=True, exist_ok=True)
    datasets = []

    if backend == "local":
        seed = seed if seed is not None else ctx.obj["seed"]
        if seed is None:
            raise ValueError("local backend requires --seed")
        for t in range(trials):
            datasets.append(local_sample(prof, schema, n, seed + t))
    else:
        cfg = _llm_config(ctx, endpoint, model, api_key_env, timeout,
                          max_retries, temperature)
        if prompt_file is not None:
            prompt_text = prompt_file.read_text(encoding="utf-8")
        else:
            p_prompt, name_map, restrictions, d = _prepare_prompt_inputs(
                ctx, profile_path, schema_path, decimals)
            spec = _spec_from_options(
                ctx, n, d, corr_threshold, include_all_correlations,
                None, restrictions)
            prompt_text = build_prompt(p_prompt, spec, name_map=name_map)
        name_map = NameMap.for_names(schema.names)
        for t in range(trials):
            audit = out_dir / (f"audit_trial{t + 1}" if trials > 1 else "audit")
            raw = llm_mod.llm_generate(prompt_text, cfg, audit_dir=audit)
            ds, warnings = llm_mod.parse_tabular(raw, schema, name_map,
                                                 expected_rows=n)
            for w in warnings:
                click.echo(f"warning: {w}", err=True)
            datasets.append(ds)

    outputs = []
    for t, ds in enumerate(datasets, start=1):
        name = "synthetic.csv" if trials == 1 else f"synthetic_trial{t}.csv"
        path = out_dir / name
        write_csv(ds, path)
        outputs.append(path)
        click.echo(f"wrote {path} ({ds.n_rows} rows)")

    if trials > 1:
        tol = _cfg(ctx, "metrics", "tol_rel", tol_rel, 0.01)
        overlaps = []
        for i in range(len(datasets)):
            for j in range(len(datasets)):
                if i == j:
                    continue
                overlaps.append({
                    "from": outputs[i].name,
                    "to": outputs[j].name,
                    "overlap": row_overlap(datasets[i], datasets[j], tol),
                })
        overlap_path = out_dir / "row_overlap.json"
        with overlap_path.open("w", encoding="utf-8") as fh:
            json.dump({"tol_rel": tol, "pairs": overlaps}, fh, indent=2)
            fh.write("\n")
        outputs.append(overlap_path)
        click.echo(f"wrote {overlap_path}")

    write_manifest(
        out_dir, "generate",
        inputs=[profile_path, schema_path],
        flags={"backend": backend, "n_rows": n, "seed": seed,
               "trials": trials},
        outputs=outputs,
    )


@main.command("evaluate")
@click.argument("real_csv", type=click.Path(path_type=Path))
@click.argument("synth_csv", type=click.Path(path_type=Path))
@click.option("--schema", "schema_path", required=True,
              type=click.Path(path_type=Path))
@click.option("-o", "--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--tol-rel", type=float, default=None)
@click.pass_context
@handle_errors
def cmd_evaluate(ctx, real_csv, synth_csv, schema_path, out_dir, tol_rel):
    """Score a synthetic CSV against the real one; exit 0 regardless of scores."""
    schema = load_schema(schema_path)
    real = load_csv(real_csv, schema)
    # lenient level handling: third-party output may violate the domain,
    # which is exactly what the audit and category metrics must observe
    synth = load_csv(synth_csv, schema, enforce_levels=False)
    tol = _cfg(ctx, "metrics", "tol_rel", tol_rel, 0.01)
    report = evaluate_datasets(real, synth, tol_rel=tol,
                               real_name=real_csv.name,
                               synth_name=synth_csv.name)
    json_path, md_path = save_report(report, out_dir)
    write_manifest(
        out_dir, "evaluate",
        inputs=[real_csv, synth_csv, schema_path],
        flags={"tol_rel": tol},
        outputs=[json_path, md_path],
    )
    click.echo(render_markdown(report))


@main.command("export-plots")
@click.argument("real_csv", type=click.Path(path_type=Path))
@click.argument("synth_csvs", nargs=-1, required=True,
                type=click.Path(path_type=Path))
@click.option("--schema", "schema_path", required=True,
              type=click.Path(path_type=Path))
@click.option("-o", "--out-dir", required=True, type=click.Path(path_type=Path))
@click.pass_context
@handle_errors
def cmd_export_plots(ctx, real_csv, synth_csvs, schema_path, out_dir):
    """Export correlation matrices, CI tables, and ordinal frequencies."""
    schema = load_schema(schema_path)
    real = load_csv(real_csv, schema)
    synths = {}
    for path in synth_csvs:
        name = path.stem
        if name in synths or name == "real":
            name = f"{name}_{len(synths) + 1}"
        synths[name] = load_csv(path, schema, enforce_levels=False)
    written = export_plot_data(real, synths, out_dir)
    write_manifest(
        out_dir, "export-plots",
        inputs=[real_csv, *synth_csvs, schema_path],
        flags={},
        outputs=written,
    )
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
