"""
Plain-text rendering of reports (the `--format text` output), via jinja2 templates.
Every renderer takes the report's JSON form, so text and JSON never drift apart.
"""
from __future__ import annotations

from jinja2 import DictLoader, Environment, StrictUndefined

_TEMPLATES = {
    "field.txt": """\
field {{ name }}
  modulus      {{ modulus_poly }}
  elements     {{ order }}
  subfields    {{ subfields | join(", ") }}
  |F°|         {{ f_circle }}
""",
    "classify.txt": """\
{{ name }}: {{ predicted_count }} affine subspaces with |U| > 2 and affine inverse image
{% for U in predicted %}
  dim {{ U.dim }}  basis [{{ U.basis | join(", ") }}]
{% endfor %}
{% if brute_count is defined %}
exhaustive check: {{ brute_count }} found, {{ "agrees" if agree else "DISAGREES" }}
{% endif %}
""",
    "certify.txt": """\
form         {{ form.kind }}{% for key, value in form.items() if key not in ("kind", "matrix") %}  {{ key }}={{ value }}{% endfor %}

t            {{ t_value }}  (in subfields of degree {{ t_divisors | join(", ") }})
{% if value_form_t is defined %}
b^-1 f(b)    {{ value_form_t }}
{% endif %}
nontrivial   {{ nontrivial_verdict }}
{% if witness %}
witness      dim {{ witness.dim }}  basis [{{ witness.basis | join(", ") }}]  rep {{ witness.rep }}
{% endif %}
fixed points: {{ fixed_points | join(", ") if fixed_points else "none" }}
two-cycles:   {% for u, v in two_cycles %}{{ "{" }}{{ u }}, {{ v }}{{ "}" }} {% else %}none{% endfor %}

overall      {{ overall }}
{% if ground_truth is defined %}
scanner      {{ ground_truth }} ({{ brute | length }} invariant subspaces)
{% endif %}
""",
    "scan.txt": """\
sbox {{ sbox_id[:16] }}  {{ subspace_count_scanned }} affine subspaces scanned, dims {{ dims_scanned | join(",") }}
{% for hit in found %}
  {{ hit.kind }}{{ " (small)" if hit.small else "" }}  dim {{ hit.subspace.dim }}  basis [{{ hit.subspace.basis | join(", ") }}]  rep {{ hit.subspace.rep }}
{% endfor %}
""",
    "construct.txt": """\
{{ count }} parameter pairs (alpha, b) with no invariant affine subspace except the field
{% for pair in pairs %}
  alpha={{ pair.alpha }}  b={{ pair.b }}
{% endfor %}
""",
    "survey.txt": """\
{% for row in rows %}
  L basis [{{ row.linear.basis | join(", ") }}]: {% for u, v in row.pairs %}{{ u }}+L -> {{ v }}+L  {% endfor %}

{% endfor %}
""",
    "aes_demo.txt": """\
AES S-box as x -> A(x^-1) + b over GF(2^8)
modulus        {{ modulus }}
b              {{ b }} = {{ b_poly }}
S(b)           {{ s_of_b }} = {{ s_of_b_poly }}
t = b^-1 S(b)  {{ t }} = {{ t_poly }}
{% for step in frobenius %}
t^{ {{- step.power -}} } = {{ step.value }} {{ "!=" if step.differs else "==" }} t
{% endfor %}
t lies in no proper subfield: {{ "yes" if t_in_f_circle else "no" }}
general-form test b^-1 A(b^-1) = {{ general_t }}
verdict        {{ verdict }}
fixed points: {{ fixed_points | join(", ") if fixed_points else "none" }}
two-cycles:    {% for u, v in two_cycles %}{{ "{" }}{{ u }}, {{ v }}{{ "}" }} {% endfor %}

{% if scan %}
full scan: {{ scan.subspace_count_scanned }} affine subspaces, {{ scan.found | length }} invariant
{% for hit in scan.found %}
  dim {{ hit.subspace.dim }}{{ " (small)" if hit.small else "" }}: {{ hit.members | join(", ") }}
{% endfor %}
{% else %}
full scan: skipped
{% endif %}
""",
}

_env = Environment(
    loader=DictLoader(_TEMPLATES),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def render(name: str, data: dict) -> str:
    return _env.get_template(f"{name}.txt").render(**data).rstrip("\n")
