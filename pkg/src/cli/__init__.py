"""Subcommand handlers for the gvkit command line."""
