# Measurement protocol schemas
