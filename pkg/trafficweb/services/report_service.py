import math
from typing import Dict, Mapping

from jinja2 import Environment

from trafficweb.services.growth_service import InvariantReport
from trafficweb.services.theory import Prediction


def _num(value, digits: int = 4) -> str:
    if value is None:
        return "-"
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.{digits}g}"


class ReportService:
    """Renders the plain-text and markdown reports printed or written by the CLI"""

    def __init__(self):
        self._env = Environment(trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
        self._env.filters["num"] = _num

    @staticmethod
    def _get_prediction_template() -> str:
        return """
Model predictions (m={{ p.m }}, delta={{ p.delta | num }})
{{ "=" * 50 }}
  A ({{ p.a_source }})        {{ p.A | num(6) }}
  theta               {{ p.theta | num(6) }}
  gamma               {{ p.gamma | num(6) }}
  <w> = delta + 1     {{ p.mean_weight | num(6) }}
  gamma bracket       [{{ low | num }}, {{ high | num }}]
"""

    @staticmethod
    def _get_invariant_template() -> str:
        return """
Invariant check ({{ r.nodes }} nodes, {{ r.steps }} steps)
{{ "=" * 50 }}
  {{ mark(r.max_out_strength_violation <= tol) }} out-strength rule s_out = m + delta k_in   max rel. violation {{ r.max_out_strength_violation | num(3) }}
  {{ mark(r.max_weight_asymmetry <= tol) }} equal out-weights                        max rel. deviation {{ r.max_weight_asymmetry | num(3) }}
  {{ mark(r.total_strength_violation <= tol) }} total in-strength +(1+m+m delta)/step   rel. deviation {{ r.total_strength_violation | num(3) }}
  {{ mark(r.max_in_strength_violation <= tol) }} s_in equals in-edge weight sum + 1      max rel. deviation {{ r.max_in_strength_violation | num(3) }}
  {{ mark(r.max_sampler_mismatch == 0) }} sampler weights equal s_in              max abs. mismatch {{ r.max_sampler_mismatch | num(3) }}
  {{ mark(r.out_degree_ok) }} every grown node has k_out = m
{% if r.passed %}
✅ All invariants hold
{% else %}
❌ Invariant check failed
{% endif %}
"""

    @staticmethod
    def _get_comparison_template() -> str:
        return """
Model vs. measurement ({{ n_nodes }} nodes, m={{ m }}, delta={{ delta | num }})
{{ "=" * 64 }}
  {{ "%-22s" | format("quantity") }}{{ "%-14s" | format("approx A") }}{{ "%-14s" | format("measured A") }}measured
{% for row in rows %}
  {{ "%-22s" | format(row.name) }}{{ "%-14s" | format(row.approx | num) }}{{ "%-14s" | format(row.from_a | num) }}{{ row.measured | num }}
{% endfor %}
"""

    @staticmethod
    def _get_ensemble_template() -> str:
        return """# Ensemble report

- runs: {{ runs }}
- m = {{ m }}, delta = {{ delta | num }}, N = {{ n_final }}, base seed = {{ seed }} (run r uses seed + r)

| key | mean | std | n |
|-----|------|-----|---|
{% for key, row in summary.items() %}
| {{ key }} | {{ row.mean | num(5) }} | {{ row.std | num(3) }} | {{ row.n }} |
{% endfor %}
"""

    @staticmethod
    def _get_sweep_template() -> str:
        return """# Delta sweep

- m = {{ m }}, N = {{ n_final }}, seed = {{ seed }} for every delta, k_in cutoff {{ x_min | num }}

| {{ columns | join(" | ") }} |
|{% for _ in columns %}-----|{% endfor %}

{% for row in rows %}
| {% for key in columns %}{{ row[key] | num(5) }} | {% endfor %}

{% endfor %}
"""

    def _render_template(self, template_str: str, context: Dict) -> str:
        """Render Jinja2 template with context"""
        template = self._env.from_string(template_str)
        return template.render(**context)

    def render_prediction(self, prediction: Prediction, bracket) -> str:
        return self._render_template(
            self._get_prediction_template(), {"p": prediction, "low": bracket[0], "high": bracket[1]}
        )

    def render_invariants(self, report: InvariantReport, tolerance: float) -> str:
        return self._render_template(
            self._get_invariant_template(),
            {"r": report, "tol": tolerance, "mark": lambda ok: "✅" if ok else "❌"},
        )

    def render_comparison(self, context: Mapping) -> str:
        return self._render_template(self._get_comparison_template(), dict(context))

    def render_ensemble(self, context: Mapping) -> str:
        return self._render_template(self._get_ensemble_template(), dict(context))

    def render_sweep(self, context: Mapping) -> str:
        return self._render_template(self._get_sweep_template(), dict(context))


# Singleton instance
report_service = ReportService()
