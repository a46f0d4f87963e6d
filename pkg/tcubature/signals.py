from blinker import Namespace

ns = Namespace()

on_filter_diverged = ns.signal("on-filter-diverged")
on_jitter_applied = ns.signal("on-jitter-applied")
on_radial_redraw = ns.signal("on-radial-redraw")
on_register_filter = ns.signal("on-register-filter")
on_register_rule = ns.signal("on-register-rule")
on_run_complete = ns.signal("on-run-complete")
on_unregister_filter = ns.signal("on-unregister-filter")
on_unregister_rule = ns.signal("on-unregister-rule")
