"""twinsmith: hyperlinked-twin website generation for MiniSpec projects.

Pages are verbatim copies of the source files, enhanced with anchors on
name declarations, links on references, tooltips listing definition and
reference sites, and syntax-highlighting spans.
"""

__version__ = "0.1.0"
