"""
Command implementations. Import them from their modules (`tflow.cli.commands`, `tflow.cli.sweep_service`);
`tflow.config` imports `tflow.cli.expressions` while it validates, so this package stays empty.
"""
