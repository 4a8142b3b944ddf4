# Command handlers, one module per CLI sub-command
