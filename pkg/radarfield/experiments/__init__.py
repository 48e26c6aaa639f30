from .core import SweepSpec, SweepResult, load_config, cache_config, reset_config, get_config, output_dir, read_csv
from .figures import Family, sweep, run_fig1, run_fig2, run_fig3, run_fig4, run_fig5, run_custom, run_figure, FIGURES
