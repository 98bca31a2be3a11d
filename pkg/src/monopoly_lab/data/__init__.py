# Persistence for solved instances and check runs
