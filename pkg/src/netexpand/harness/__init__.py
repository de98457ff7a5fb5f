"""Dataset registry, experiment drivers and the command-line entry point."""
