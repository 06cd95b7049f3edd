package org.apache.hadoop.yarn.server.resourcemanager;

public interface AppManager {
    /**
     * Accepts a client submission.
     */
    String submitApplication(String jobId);

    /**
     * Reports the state of an application.
     */
    String getAppReport(String jobId);
}
