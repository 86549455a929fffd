# Root
ROOT = "root"
CONFORMANCE = "conformance"

# Design
CREATE_DESIGN = "create-design"
CREATE_SCHEDULE = "create-schedule"
CREATE_ORDER_SCALING = "create-order-scaling"
