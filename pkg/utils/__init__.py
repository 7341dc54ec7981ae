# Utils package for state files and backend checks
