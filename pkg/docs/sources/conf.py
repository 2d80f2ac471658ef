"""Sphinx configuration for the isingbench docs."""

import os
import re
import sys
from pathlib import Path

sys.path.insert(0, os.path.abspath("../../src/"))

# -- Project information -----------------------------------------------------
master_doc = "index"

project = "isingbench"
copyright = "2025, takotime808"
author = "takotime808"

# -- General configuration ---------------------------------------------------
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "autoapi.extension",
    "myst_parser",
    "sphinx_copybutton",
]

autodoc_default_options = {
    "show-inheritance": True,
    "inherited-members": True,
    "no-special-members": True,
}
autoclass_content = "both"
add_module_names = False
autosummary_generate = True

autoapi_type = "python"
autoapi_dirs = ["../../src/isingbench/", "../../src/cli_isingbench/"]
autoapi_add_toctree_entry = False
autoapi_options = [
    "members",
    "undoc-members",
    "show-inheritance",
    "show-module-summary",
]

templates_path = ["_templates"]
exclude_patterns = ["build", "_build", ".DS_Store", "Thumbs.db"]

add_function_parentheses = False
toc_object_entries_show_parents = "hide"

# -- Napoleon ------------------------------------------------------------------
napoleon_numpy_docstring = True
napoleon_google_docstring = False
napoleon_use_param = True
napoleon_use_admonition_for_examples = True
napoleon_use_admonition_for_notes = True

# -- Markdown ------------------------------------------------------------------
myst_enable_extensions = [
    "colon_fence",
    "deflist",
    "dollarmath",
]
myst_heading_anchors = 3

# -- HTML output ---------------------------------------------------------------
html_theme = "furo"
html_theme_options = {
    "announcement": "<em>isingbench</em>: MAX-CUT heuristics and time-to-target benchmarks",
}
html_static_path = []
html_show_sphinx = False


def _patch_readme_for_docs():
    """Copy README.md next to the docs with relative image paths rewritten."""
    docs_src = Path(__file__).parent
    project_root = docs_src.parent.parent
    text = (project_root / "README.md").read_text(encoding="utf-8")

    def _fix(match):
        url = match.group(2)
        if re.match(r"^([a-z]+:)?//", url) or url.startswith(("#", "/")):
            return match.group(0)
        fixed = f"../../{url.lstrip('./')}".replace("../../docs/sources/", "")
        return f"{match.group(1)}{fixed}{match.group(3)}"

    text = re.sub(r"(!\[[^\]]*\]\()([^)]+)(\))", _fix, text)
    text = re.sub(r'(<img[^>]*\bsrc=")([^"]+)(")', _fix, text)
    (docs_src / "_README_docs.md").write_text(text, encoding="utf-8")


def setup(app):
    _patch_readme_for_docs()
