"""File formats and rendering: site files, diagram files, grey maps, SVG."""
