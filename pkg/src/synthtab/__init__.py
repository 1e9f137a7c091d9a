"""synthtab: profile real tables, build generation prompts, synthesize
tables (LLM endpoint or built-in correlated sampler), and score synthetic
data with a fidelity and privacy metric battery."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .data import (
    ColumnSchema,
    Dataset,
    TableSchema,
    drop_columns,
    load_csv,
    load_schema,
    rename_columns,
    save_schema,
    write_csv,
)
from .llm import LlmConfig, RawGeneration, llm_generate, parse_tabular
from .metrics import (
    MetricReport,
    MetricScore,
    aggregate,
    boundary_adherence,
    category_adherence,
    category_coverage,
    ci_overlap_percent,
    correlation_similarity,
    evaluate_datasets,
    ks_complement,
    new_row_synthesis,
    range_coverage,
    row_overlap,
    statistic_similarity,
    tv_complement,
    violation_audit,
)
from .profiling import (
    ColumnStats,
    CorrelationEntry,
    DatasetProfile,
    confidence_interval,
    load_profile,
    pearson,
    profile,
    round_profile,
    save_profile,
    significant_pairs,
)
from .prompting import (
    GenerationSpec,
    NameMap,
    amplify,
    build_prompt,
    derive_restrictions,
    obfuscate,
)
from .report import export_plot_data, render_markdown, save_report
from .sampling import local_sample, nearest_pd

__version__ = "0.1.0"
