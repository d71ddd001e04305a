# Sweep and comparison result schemas
