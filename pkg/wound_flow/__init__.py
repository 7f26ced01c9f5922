from wound_flow.wound_flow import WoundFlow
