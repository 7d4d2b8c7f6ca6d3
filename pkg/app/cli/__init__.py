"""Command-line layer: config files, logging and the `maxbloch` entry point."""
