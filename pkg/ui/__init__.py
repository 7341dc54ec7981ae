# UI package for the command-line interface
