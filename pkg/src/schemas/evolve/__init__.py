# Time evolution schemas
