# Parameter mapping schemas
