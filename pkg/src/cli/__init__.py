# Command line module
