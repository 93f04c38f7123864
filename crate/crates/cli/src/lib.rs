//! Library surface of the xdtile command-line tool.
