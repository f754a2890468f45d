# Core engine for pictures, tiling systems, machines and their encodings
