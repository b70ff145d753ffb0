//! Workspace member holding the `acceptance` test target.
