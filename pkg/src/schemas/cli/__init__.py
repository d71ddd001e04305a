# Run configuration schemas for the command-line front end
