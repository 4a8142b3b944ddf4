# Scheduler module
