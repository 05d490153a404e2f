# Project information
project = "evolib"
project_copyright = f"2026 {project} developers"
author = "evolib developers"
version = "main"
release = version

# General configuration
extensions = ["myst_parser", "sphinxcontrib.mermaid"]
source_suffix = {".md": "markdown"}

html_theme_options = {
    "code_font_size": "0.8em",
}

# Automatically create anchors on titles following GitHub logic
myst_heading_anchors = 3
