//! Placeholder; the guide chapters are attached later.
