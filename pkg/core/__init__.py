# Core package: states, information measures, basis search and demon accounting
